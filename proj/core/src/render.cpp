#include <algorithm>
#include <cmath>
#include <limits>

#include "pmsgp/rng.hpp"
#include "pmsgp/scene.hpp"

namespace pmsgp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ray {
  double ox, oy, oz;
  double dx, dy;  // dz is -1, so the ray parameter equals camera depth
};

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty() const { return lo > hi; }
  void clip(double a, double b) {
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
};

Interval height_slab(const Ray& r, const SceneObject& o) {
  // z(t) = oz - t must lie in [base, top].
  return {r.oz - top_height(o), r.oz - o.z};
}

double hit_box(const Ray& r, const SceneObject& o) {
  Interval t = height_slab(r, o);
  const double c = std::cos(o.yaw);
  const double s = std::sin(o.yaw);
  const double ex = r.ox - o.x;
  const double ey = r.oy - o.y;
  const double lx = c * ex + s * ey;
  const double ly = -s * ex + c * ey;
  const double ldx = c * r.dx + s * r.dy;
  const double ldy = -s * r.dx + c * r.dy;
  const double half[2] = {0.5 * o.dims[0], 0.5 * o.dims[1]};
  const double pos[2] = {lx, ly};
  const double dir[2] = {ldx, ldy};
  for (int a = 0; a < 2; ++a) {
    if (std::fabs(dir[a]) < 1e-15) {
      if (std::fabs(pos[a]) > half[a]) return kInf;
      continue;
    }
    double t1 = (-half[a] - pos[a]) / dir[a];
    double t2 = (half[a] - pos[a]) / dir[a];
    if (t1 > t2) std::swap(t1, t2);
    t.clip(t1, t2);
  }
  if (t.empty() || t.hi < 0.0) return kInf;
  return std::max(t.lo, 0.0);
}

double hit_cylinder(const Ray& r, const SceneObject& o) {
  Interval t = height_slab(r, o);
  const double rad = 0.5 * o.dims[0];
  const double ex = r.ox - o.x;
  const double ey = r.oy - o.y;
  const double a = r.dx * r.dx + r.dy * r.dy;
  const double b = 2.0 * (ex * r.dx + ey * r.dy);
  const double c = ex * ex + ey * ey - rad * rad;
  if (a < 1e-18) {
    if (c > 0.0) return kInf;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return kInf;
    const double sq = std::sqrt(disc);
    t.clip((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a));
  }
  if (t.empty() || t.hi < 0.0) return kInf;
  return std::max(t.lo, 0.0);
}

double hit_sphere(const Ray& r, const SceneObject& o) {
  const double rad = 0.5 * o.dims[0];
  const double ex = r.ox - o.x;
  const double ey = r.oy - o.y;
  const double ez = r.oz - (o.z + rad);
  const double a = r.dx * r.dx + r.dy * r.dy + 1.0;
  const double b = 2.0 * (ex * r.dx + ey * r.dy - ez);
  const double c = ex * ex + ey * ey + ez * ez - rad * rad;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return t >= 0.0 ? t : kInf;
}

double hit(const Ray& r, const SceneObject& o) {
  switch (o.shape) {
    case Shape::kBox: return hit_box(r, o);
    case Shape::kCylinder: return hit_cylinder(r, o);
    case Shape::kSphere: return hit_sphere(r, o);
  }
  return kInf;
}

}  // namespace

RenderedView render_view(const Scene& s, const VirtualCamera& cam, bool crop) {
  validate(cam);
  const CameraIntrinsics k = cam.view_intrinsics(crop);
  const int w = cam.view_width(crop);
  const int h = cam.view_height(crop);
  const double cam_z = s.ground_height + cam.height;
  for (const auto& o : s.objects) {
    if (top_height(o) >= cam_z - 1e-3) {
      throw Error(Errc::kInvalidArgument, "camera must be above every object");
    }
  }

  const double ground_depth = cam.height;
  std::vector<double> tbuf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), ground_depth);
  LabelImage labels(w, h, 0);

  std::vector<double> xn(static_cast<std::size_t>(w));
  std::vector<double> yn(static_cast<std::size_t>(h));
  for (int u = 0; u < w; ++u) xn[u] = (u - k.cx) / k.fx;
  for (int v = 0; v < h; ++v) yn[v] = (v - k.cy) / k.fy;
  const double cr = std::cos(cam.view_rotation);
  const double sr = std::sin(cam.view_rotation);

  for (const auto& o : s.objects) {
    // Conservative pixel bounds from the projected corners of the object's world AABB.
    const double rad = footprint_radius(o);
    double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
    for (int corner = 0; corner < 8; ++corner) {
      const WorldPoint p{o.x + ((corner & 1) ? rad : -rad), o.y + ((corner & 2) ? rad : -rad),
                         (corner & 4) ? top_height(o) : o.z};
      const CameraPoint cp = world_to_camera(p, cam, s.ground_height);
      const Point2d px = camera_to_pixel(cp, k);
      umin = std::min(umin, px.x);
      umax = std::max(umax, px.x);
      vmin = std::min(vmin, px.y);
      vmax = std::max(vmax, px.y);
    }
    const int u0 = std::max(0, static_cast<int>(std::floor(umin)) - 1);
    const int u1 = std::min(w - 1, static_cast<int>(std::ceil(umax)) + 1);
    const int v0 = std::max(0, static_cast<int>(std::floor(vmin)) - 1);
    const int v1 = std::min(h - 1, static_cast<int>(std::ceil(vmax)) + 1);
    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        const Ray ray{cam.x, cam.y, cam_z, cr * xn[u] + sr * yn[v], sr * xn[u] - cr * yn[v]};
        const double t = hit(ray, o);
        const std::size_t idx = static_cast<std::size_t>(v) * static_cast<std::size_t>(w) +
                                static_cast<std::size_t>(u);
        if (t < tbuf[idx]) {
          tbuf[idx] = t;
          labels.at(u, v) = o.id;
        }
      }
    }
  }

  DepthImage depth(w, h, 0.0f);
  auto dv = depth.values();
  for (std::size_t i = 0; i < tbuf.size(); ++i) dv[i] = static_cast<float>(tbuf[i]);
  return {std::move(depth), std::move(labels)};
}

DepthImage render_depth(const Scene& s, const VirtualCamera& cam, bool crop) {
  return render_view(s, cam, crop).depth;
}

LabelImage render_labels(const Scene& s, const VirtualCamera& cam, bool crop) {
  return render_view(s, cam, crop).labels;
}

DepthImage add_depth_noise(const DepthImage& img, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) return img;
  DepthImage out = img;
  Rng rng(seed);
  for (float& v : out.values()) {
    if (!is_valid_depth(v)) continue;
    const double noisy = static_cast<double>(v) + sigma * rng.gaussian();
    v = static_cast<float>(std::max(noisy, 1e-4));
  }
  return out;
}

}  // namespace pmsgp
