#include "pmsgp/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmsgp/rng.hpp"

namespace pmsgp {

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::kBox: return "box";
    case Shape::kCylinder: return "cylinder";
    case Shape::kSphere: return "sphere";
  }
  return "box";
}

Shape shape_from_string(std::string_view s) {
  if (s == "box") return Shape::kBox;
  if (s == "cylinder") return Shape::kCylinder;
  if (s == "sphere") return Shape::kSphere;
  throw Error(Errc::kParse, "unknown shape '" + std::string(s) + "'");
}

double top_height(const SceneObject& o) { return o.z + o.dims[2]; }

double footprint_radius(const SceneObject& o) {
  if (o.shape == Shape::kBox) return 0.5 * std::hypot(o.dims[0], o.dims[1]);
  return 0.5 * o.dims[0];
}

bool footprint_contains(const SceneObject& o, double x, double y) {
  const double ex = x - o.x;
  const double ey = y - o.y;
  if (o.shape == Shape::kBox) {
    const double c = std::cos(o.yaw);
    const double s = std::sin(o.yaw);
    const double lx = c * ex + s * ey;
    const double ly = -s * ex + c * ey;
    return std::fabs(lx) <= 0.5 * o.dims[0] && std::fabs(ly) <= 0.5 * o.dims[1];
  }
  const double r = 0.5 * o.dims[0];
  return ex * ex + ey * ey <= r * r;
}

std::optional<double> surface_height(const SceneObject& o, double x, double y) {
  if (!footprint_contains(o, x, y)) return std::nullopt;
  if (o.shape != Shape::kSphere) return top_height(o);
  const double r = 0.5 * o.dims[0];
  const double rho2 = (x - o.x) * (x - o.x) + (y - o.y) * (y - o.y);
  return o.z + r + std::sqrt(std::max(0.0, r * r - rho2));
}

const SceneObject* Scene::find(int id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

namespace {

std::vector<Point2d> footprint_samples(const SceneObject& o, double grid) {
  const double hx = 0.5 * o.dims[0];
  const double hy = 0.5 * o.dims[1];
  const int nx = static_cast<int>(std::ceil(2.0 * hx / grid)) + 1;
  const int ny = static_cast<int>(std::ceil(2.0 * hy / grid)) + 1;
  const double c = std::cos(o.yaw);
  const double s = std::sin(o.yaw);
  std::vector<Point2d> out;
  out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    const double ly = -hy + 2.0 * hy * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double lx = -hx + 2.0 * hx * i / (nx - 1);
      if (o.shape != Shape::kBox && lx * lx + ly * ly > hx * hx) continue;
      out.push_back({o.x + c * lx - s * ly, o.y + s * lx + c * ly});
    }
  }
  return out;
}

double uniform_in(Rng& rng, const std::array<double, 2>& range) { return rng.uniform(range[0], range[1]); }

}  // namespace

SupportInfo compute_support(std::span<const SceneObject> below, const SceneObject& o,
                            double ground_height, double grid) {
  const auto samples = footprint_samples(o, grid);
  SupportInfo info{ground_height, 0, 1.0};
  const double reach = footprint_radius(o);
  for (Point2d p : samples) {
    for (const auto& b : below) {
      if (std::hypot(b.x - o.x, b.y - o.y) > reach + footprint_radius(b)) continue;
      if (!footprint_contains(b, p.x, p.y)) continue;
      const double top = top_height(b);
      if (top > info.height) {
        info.height = top;
        info.support_id = b.id;
      }
    }
  }
  if (info.support_id == 0 || samples.empty()) return info;
  const SceneObject* support = nullptr;
  for (const auto& b : below) {
    if (b.id == info.support_id) support = &b;
  }
  const auto covered = std::count_if(samples.begin(), samples.end(), [&](Point2d p) {
    return footprint_contains(*support, p.x, p.y);
  });
  info.coverage = static_cast<double>(covered) / static_cast<double>(samples.size());
  return info;
}

Scene generate_scene(std::uint64_t seed, int n, const ShapeMix& mix, const SceneParams& params) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "scene needs at least one object");
  const double total = mix.box + mix.cylinder + mix.sphere;
  if (!(total > 0.0) || mix.box < 0.0 || mix.cylinder < 0.0 || mix.sphere < 0.0) {
    throw Error(Errc::kInvalidArgument, "shape mix weights must be >= 0 with a positive sum");
  }
  Scene scene;
  scene.seed = seed;
  scene.ground_height = params.ground_height;
  scene.workspace = params.workspace;
  Rng rng(mix64(seed));
  const auto& ws = params.workspace;

  for (int i = 0; i < n; ++i) {
    SceneObject o;
    o.id = i + 1;
    const double pick = rng.uniform() * total;
    if (pick < mix.box) {
      o.shape = Shape::kBox;
      o.dims = {uniform_in(rng, params.box_side), uniform_in(rng, params.box_side),
                uniform_in(rng, params.box_height)};
      o.material = "cardboard";
    } else if (pick < mix.box + mix.cylinder) {
      o.shape = Shape::kCylinder;
      const double d = uniform_in(rng, params.cylinder_diameter);
      o.dims = {d, d, uniform_in(rng, params.cylinder_height)};
      o.material = "plastic";
    } else {
      o.shape = Shape::kSphere;
      const double d = uniform_in(rng, params.sphere_diameter);
      o.dims = {d, d, d};
      o.material = "rubber";
    }

    bool placed = false;
    for (int attempt = 0; attempt < params.max_retries && !placed; ++attempt) {
      o.x = rng.uniform(ws.x_min, ws.x_max);
      o.y = rng.uniform(ws.y_min, ws.y_max);
      o.yaw = rng.uniform(0.0, kPi);
      const SupportInfo support =
          compute_support(scene.objects, o, scene.ground_height, params.support_grid);
      if (support.support_id != 0 && support.coverage < params.min_support_fraction) continue;
      o.z = support.height;
      placed = true;
    }
    if (!placed) {
      throw Error(Errc::kSceneGeneration,
                  "could not place object " + std::to_string(o.id) + " with enough support");
    }
    scene.objects.push_back(o);
  }
  return scene;
}

Scene remove_and_resettle(const Scene& scene, int id, double grid) {
  Scene out = scene;
  out.objects.clear();
  for (const auto& o : scene.objects) {
    if (o.id == id) continue;
    SceneObject settled = o;
    settled.z = compute_support(out.objects, o, scene.ground_height, grid).height;
    out.objects.push_back(settled);
  }
  return out;
}

Pixel VirtualCamera::crop_origin() const {
  return {(full_width - crop_width) / 2, (full_height - crop_height) / 2};
}

CameraIntrinsics VirtualCamera::crop_intrinsics() const {
  const Pixel o = crop_origin();
  return {intrinsics.fx, intrinsics.fy, intrinsics.cx - o.x, intrinsics.cy - o.y};
}

void validate(const VirtualCamera& cam) {
  validate(cam.intrinsics);
  if (!(cam.height > 0.0)) throw Error(Errc::kConfig, "camera height must be positive");
  if (cam.full_width <= 0 || cam.full_height <= 0 || cam.crop_width <= 0 || cam.crop_height <= 0) {
    throw Error(Errc::kConfig, "camera resolutions must be positive");
  }
  if (cam.crop_width > cam.full_width || cam.crop_height > cam.full_height) {
    throw Error(Errc::kConfig, "crop must not exceed the full resolution");
  }
}

WorldPoint camera_to_world(const CameraPoint& p, const VirtualCamera& cam, double ground_height) {
  const Point2d off = camera_offset_to_world(p.x, p.y, cam.view_rotation);
  return {cam.x + off.x, cam.y + off.y, ground_height + cam.height - p.z};
}

CameraPoint world_to_camera(const WorldPoint& p, const VirtualCamera& cam, double ground_height) {
  const double dx = p.x - cam.x;
  const double dy = p.y - cam.y;
  const double c = std::cos(cam.view_rotation);
  const double s = std::sin(cam.view_rotation);
  return {c * dx + s * dy, s * dx - c * dy, ground_height + cam.height - p.z};
}

Point2d camera_offset_to_world(double dx, double dy, double view_rotation) {
  // Camera x maps to (cos r, sin r) and camera y (image down) to (sin r, -cos r).
  const double c = std::cos(view_rotation);
  const double s = std::sin(view_rotation);
  return {c * dx + s * dy, s * dx - c * dy};
}

int topmost_object(const Scene& s, const VirtualCamera& cam) {
  if (s.empty()) throw Error(Errc::kEmptyScene, "topmost object of an empty scene");
  const RenderedView view = render_view(s, cam, false);
  return view.labels[min_depth_pixel(view.depth)];
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::kCollisionAdjacent: return "collision-adjacent";
    case FailureReason::kCollisionGround: return "collision-ground";
    case FailureReason::kMissedTarget: return "missed-target";
    case FailureReason::kWidthExceeded: return "width-exceeded";
    case FailureReason::kAntipodalFail: return "antipodal-fail";
  }
  return "missed-target";
}

FailureReason failure_reason_from_string(std::string_view s) {
  for (auto r : {FailureReason::kCollisionAdjacent, FailureReason::kCollisionGround,
                 FailureReason::kMissedTarget, FailureReason::kWidthExceeded,
                 FailureReason::kAntipodalFail}) {
    if (to_string(r) == s) return r;
  }
  throw Error(Errc::kParse, "unknown failure reason '" + std::string(s) + "'");
}

}  // namespace pmsgp
