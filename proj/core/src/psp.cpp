#include "pmsgp/psp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmsgp/raster_io.hpp"
#include "pmsgp/rng.hpp"

namespace pmsgp {

BinaryMask OracleSegmenter::segment(const SegmentInput& in, std::span<const Pixel> prompts) const {
  return oracle_segment(in.labels, prompts);
}

NoisySegmenter::NoisySegmenter(double corruption) : corruption_(corruption) {
  if (!(corruption >= 0.0 && corruption <= 1.0)) {
    throw Error(Errc::kConfig, "corruption must lie in [0, 1]");
  }
}

BinaryMask NoisySegmenter::segment(const SegmentInput& in, std::span<const Pixel> prompts) const {
  return noisy_segment(in.labels, prompts, in.seed, corruption_);
}

RegionGrowSegmenter::RegionGrowSegmenter(double tol) : tol_(tol) {
  if (!(tol >= 0.0)) throw Error(Errc::kConfig, "region-grow tolerance must be >= 0");
}

BinaryMask RegionGrowSegmenter::segment(const SegmentInput& in, std::span<const Pixel> prompts) const {
  std::vector<Pixel> seeds;
  for (Pixel p : prompts) {
    if (in.depth.in_bounds(p) && is_valid_depth(in.depth[p])) seeds.push_back(p);
  }
  if (seeds.empty()) return BinaryMask(in.depth.width(), in.depth.height(), 0);
  return region_grow(in.depth, seeds, tol_);
}

MaskFileSegmenter::MaskFileSegmenter(const std::string& path) : mask_(load_mask(path)) {}

BinaryMask MaskFileSegmenter::segment(const SegmentInput& in, std::span<const Pixel>) const {
  if (!mask_.same_shape(in.depth)) {
    throw Error(Errc::kDimensionMismatch, "imported mask does not match the view size");
  }
  return mask_;
}

std::unique_ptr<Segmenter> make_segmenter(const PipelineConfig& cfg) {
  if (cfg.segmenter == "oracle") return std::make_unique<OracleSegmenter>();
  if (cfg.segmenter == "noisy") return std::make_unique<NoisySegmenter>(cfg.corruption);
  if (cfg.segmenter == "region-grow") return std::make_unique<RegionGrowSegmenter>(cfg.dilation_tol);
  if (cfg.segmenter == "file") return std::make_unique<MaskFileSegmenter>(cfg.mask_file);
  throw Error(Errc::kConfig, "unknown segmenter '" + cfg.segmenter + "'");
}

AlignOptions align_options(const PipelineConfig& cfg, std::uint64_t seed) {
  AlignOptions opt;
  const auto& ws = cfg.scene.workspace;
  const double m = cfg.camera_margin;
  opt.bounds = {ws.x_min - m, ws.x_max + m, ws.y_min - m, ws.y_max + m};
  opt.noise_sigma = cfg.noise_sigma;
  opt.seed = seed;
  opt.depth_lo = cfg.depth_lo;
  opt.depth_hi = cfg.depth_hi;
  return opt;
}

namespace {

RenderedView sense(const Scene& scene, const VirtualCamera& cam, bool crop, const AlignOptions& opt,
                   std::uint64_t step) {
  RenderedView v = render_view(scene, cam, crop);
  if (opt.noise_sigma > 0.0) v.depth = add_depth_noise(v.depth, opt.noise_sigma, derive_seed({opt.seed, step}));
  return v;
}

// min_depth_pixel of the range-clamped image without building it.
Pixel min_depth_in_range(const DepthImage& img, double lo, double hi) {
  if (!(lo > 0.0) || !(lo < hi)) throw Error(Errc::kConfig, "depth clamp requires 0 < lo < hi");
  Pixel best{-1, -1};
  float best_d = std::numeric_limits<float>::infinity();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const float d = img.at(x, y);
      if (!is_valid_depth(d) || static_cast<double>(d) < lo || static_cast<double>(d) > hi) continue;
      if (d < best_d) {
        best_d = d;
        best = {x, y};
      }
    }
  }
  if (best.x < 0) throw Error(Errc::kNoValidPixel, "depth image has no valid pixel in range");
  return best;
}

Pixel principal_pixel(const VirtualCamera& cam) {
  const CameraIntrinsics k = cam.crop_intrinsics();
  const Pixel p = round_pixel({k.cx, k.cy});
  return {std::clamp(p.x, 0, cam.crop_width - 1), std::clamp(p.y, 0, cam.crop_height - 1)};
}

}  // namespace

AlignedView top_view_align(const Scene& scene, const VirtualCamera& cam, const AlignOptions& opt) {
  AlignedView out;
  VirtualCamera c = cam;
  for (int step = 0; step < 3; ++step) {
    const bool crop = step > 0;
    const RenderedView v = sense(scene, c, crop, opt, static_cast<std::uint64_t>(step));
    const Pixel t = min_depth_in_range(v.depth, opt.depth_lo, opt.depth_hi);
    const CameraPoint p = pixel_to_camera(to_point(t), v.depth[t], c.view_intrinsics(crop));
    const Point2d off = camera_offset_to_world(p.x, p.y, c.view_rotation);
    const double nx = std::clamp(c.x + off.x, opt.bounds.x_min, opt.bounds.x_max);
    const double ny = std::clamp(c.y + off.y, opt.bounds.y_min, opt.bounds.y_max);
    const bool clamped = nx != c.x + off.x || ny != c.y + off.y;
    out.trace.push_back({crop, t, nx - c.x, ny - c.y, clamped});
    c.x = nx;
    c.y = ny;
  }
  RenderedView v = sense(scene, c, true, opt, 3);
  out.camera = c;
  out.depth = std::move(v.depth);
  out.labels = std::move(v.labels);
  out.crop_origin = c.crop_origin();
  out.prompt = principal_pixel(c);
  return out;
}

AlignedView fixed_view(const Scene& scene, const VirtualCamera& cam, const AlignOptions& opt) {
  AlignedView out;
  RenderedView v = sense(scene, cam, true, opt, 0);
  out.camera = cam;
  out.prompt = min_depth_in_range(v.depth, opt.depth_lo, opt.depth_hi);
  out.depth = std::move(v.depth);
  out.labels = std::move(v.labels);
  out.crop_origin = cam.crop_origin();
  return out;
}

namespace {

long long cross(Pixel o, Pixel a, Pixel b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

long long dist2(Pixel a, Pixel b) {
  const long long dx = a.x - b.x;
  const long long dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Strict convex hull vertices (collinear points dropped). Every endpoint of a
// diameter is a strict vertex, so the search below can ignore the rest.
std::vector<Pixel> hull_vertices(std::vector<Pixel> pts) {
  std::sort(pts.begin(), pts.end(), [](Pixel a, Pixel b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Pixel> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

std::pair<Pixel, Pixel> farthest_pixel_pair(std::span<const Pixel> edge) {
  const std::vector<Pixel> hull = hull_vertices({edge.begin(), edge.end()});
  if (hull.size() < 2) throw Error(Errc::kDegenerateEdge, "need at least two distinct edge pixels");
  long long best = -1;
  std::pair<Pixel, Pixel> out;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const long long d = dist2(hull[i], hull[j]);
      const std::pair<Pixel, Pixel> pair = std::minmax(hull[i], hull[j]);
      if (d > best || (d == best && pair < out)) {
        best = d;
        out = pair;
      }
    }
  }
  return out;
}

std::pair<Pixel, Pixel> perpendicular_pair(std::span<const Pixel> edge, Pixel a, Pixel b) {
  const long long ax = b.x - a.x;
  const long long ay = b.y - a.y;
  const long long px = a.x + b.x;
  const long long py = a.y + b.y;
  const long long limit = 2 * (ax * ax + ay * ay);
  std::vector<Pixel> near;
  for (Pixel q : edge) {
    // Distance from q to the bisector is |(2q - P) . a| / (2|a|); compare squares exactly.
    const long long s = (2LL * q.x - px) * ax + (2LL * q.y - py) * ay;
    if (s * s <= limit) near.push_back(q);
  }
  try {
    return farthest_pixel_pair(near);
  } catch (const Error&) {
    throw Error(Errc::kDegenerateCross, "fewer than two edge pixels on the perpendicular bisector");
  }
}

PspResult run_psp(const Scene& scene, const VirtualCamera& cam, const Segmenter& seg,
                  const PipelineConfig& cfg, std::uint64_t seed) {
  const AlignOptions opt = align_options(cfg, seed);
  PspResult r;
  r.view = cfg.no_tva ? fixed_view(scene, cam, opt) : top_view_align(scene, cam, opt);
  r.depth = fill_depth_holes(clamp_depth_range(r.view.depth, cfg.depth_lo, cfg.depth_hi));
  const SegmentInput in{r.depth, r.view.labels, derive_seed({seed, 0x5e9})};
  const Pixel prompt = r.view.prompt;
  r.first = seg.segment(in, std::span<const Pixel>(&prompt, 1));
  if (!r.first.same_shape(r.depth)) {
    throw Error(Errc::kDimensionMismatch, "segmenter returned a mask of the wrong size");
  }
  if (mask_area(r.first) == 0) throw Error(Errc::kSegmentationFailure, "first segmentation is empty");
  if (cfg.no_cps) {
    r.refined = r.first;
    return r;
  }
  // Depth threshold first: only pixels within dilation_tol of the prompt's depth may join,
  // so the growth cannot walk down side walls to lower surfaces.
  DepthImage band = r.depth;
  const double d0 = r.depth[prompt];
  for (float& v : band.values()) {
    if (std::fabs(static_cast<double>(v) - d0) > cfg.dilation_tol) v = 0.0f;
  }
  const BinaryMask grown = region_grow(band, std::span<const Pixel>(&prompt, 1), cfg.dilation_tol);
  const EdgeSet edge = sobel_edges(r.first);
  try {
    const auto [pm, pm2] = farthest_pixel_pair(edge);
    const auto [pp, pp2] = perpendicular_pair(edge, pm, pm2);
    r.cross_prompts = {pm, pm2, pp, pp2};
  } catch (const Error& e) {
    if (e.code() != Errc::kDegenerateEdge && e.code() != Errc::kDegenerateCross) throw;
    r.degenerate_cross = true;
    r.refined = mask_union(r.first, grown);
    return r;
  }
  const BinaryMask second = seg.segment(in, r.cross_prompts);
  r.refined = mask_union(second, grown);
  return r;
}

}  // namespace pmsgp
