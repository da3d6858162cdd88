#include <algorithm>
#include <limits>
#include <tuple>

#include "pmsgp/msp.hpp"

namespace pmsgp {

Point2d raster_center(int width, int height) { return {0.5 * (width - 1), 0.5 * (height - 1)}; }

bool passes_self_collision(const GraspBox& g, const BinaryMask& mask) {
  const Pixel c = round_pixel(g.center());
  if (!mask.in_bounds(c) || mask[c] == 0) return false;
  for (Pixel p : short_side_pixels(g)) {
    if (!mask.in_bounds(p) || mask[p] != 0) return false;
  }
  return true;
}

bool passes_adjacent_collision(const GraspBox& g, const DepthImage& depth, double T_d) {
  const Pixel c = round_pixel(g.center());
  if (!depth.in_bounds(c) || !is_valid_depth(depth[c])) return false;
  const double dc = depth[c];
  for (Pixel p : short_side_pixels(g)) {
    if (!depth.in_bounds(p) || !is_valid_depth(depth[p])) return false;
    if (std::fabs(static_cast<double>(depth[p]) - dc) > T_d) return false;
  }
  return true;
}

CandidateSet filter_self_collision(const CandidateSet& g, const BinaryMask& mask) {
  CandidateSet out;
  out.stage = Stage::kGDouble;
  out.rotation = g.rotation;
  for (const auto& c : g.items) {
    if (passes_self_collision(c.box, mask)) out.items.push_back(c);
  }
  return out;
}

CandidateSet filter_adjacent_collision(const CandidateSet& g, const DepthImage& depth, double T_d) {
  if (!(T_d > 0.0)) throw Error(Errc::kInvalidArgument, "T_d must be > 0");
  CandidateSet out;
  out.stage = Stage::kGTriple;
  out.rotation = g.rotation;
  for (const auto& c : g.items) {
    if (passes_adjacent_collision(c.box, depth, T_d)) out.items.push_back(c);
  }
  return out;
}

Candidate select_optimal(const CandidateSet& g, const DepthImage& depth) {
  if (g.empty()) throw Error(Errc::kNoGrasp, "no candidate left to select");
  const Candidate* best = nullptr;
  auto key = [&](const Candidate& c) {
    const Pixel p = round_pixel(c.box.center());
    const double d = depth.in_bounds(p) && is_valid_depth(depth[p]) ? depth[p]
                                                                     : std::numeric_limits<double>::infinity();
    return std::make_tuple(d, c.box.y, c.box.x, c.box.theta, c.id);
  };
  for (const auto& c : g.items) {
    if (best == nullptr || key(c) < key(*best)) best = &c;
  }
  return *best;
}

Refinement refine_grasp(const GraspBox& g, const BinaryMask& mask, const DepthImage& depth, double e_c,
                        const CameraIntrinsics& k) {
  Refinement out{g, {g.center(), g.w, g.h, g.theta}, false};
  const Pixel cp = round_pixel(g.center());
  if (!depth.in_bounds(cp) || !is_valid_depth(depth[cp])) return out;
  const Point2d u = g.axis();
  const Point2d n = g.finger_axis();
  double smin = std::numeric_limits<double>::infinity(), smax = -smin, tmin = smin, tmax = -smin;
  bool any = false;
  for (Pixel p : covered_pixels(g, mask.width(), mask.height())) {
    if (mask[p] == 0) continue;
    const Point2d d = to_point(p) - g.center();
    const double s = d.dot(u);
    const double t = d.dot(n);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    any = true;
  }
  if (!any) return out;
  const double span = std::min(smax - smin + 1.0, g.w);
  const double e_px = e_c * k.fx / static_cast<double>(depth[cp]);
  const Point2d c = g.center() + u * (0.5 * (smax + smin)) + n * (0.5 * (tmax + tmin));
  out.rect = {c, span, tmax - tmin + 1.0, g.theta};
  out.box = make_grasp_box(c.x, c.y, span + e_px, g.h, g.theta);
  out.refined = true;
  return out;
}

namespace {

GraspBox unrotate(const GraspBox& g, Point2d center, double alpha) {
  const Point2d p = rotate_point(g.center(), center, -alpha);
  return make_grasp_box(p.x, p.y, g.w, g.h, g.theta + alpha);
}

}  // namespace

MspResult run_msp(const DepthImage& depth, const BinaryMask& mask, const CandidateGenerator& gen,
                  const PipelineConfig& cfg, const CameraIntrinsics& k) {
  if (!depth.same_shape(mask)) throw Error(Errc::kDimensionMismatch, "depth and mask differ in size");
  if (mask_area(mask) == 0) throw Error(Errc::kEmptyMask, "monozone sampling needs a non-empty mask");
  const Point2d center = raster_center(mask.width(), mask.height());
  const int turns = std::max(1, static_cast<int>(std::llround(360.0 / cfg.view_rotation_step_deg)));
  MspResult out;
  for (int step = 0; step < turns; ++step) {
    const double alpha = deg_to_rad(cfg.view_rotation_step_deg * step);
    DepthImage d;
    BinaryMask m;
    if (step == 0) {
      d = depth;
      m = mask;
    } else {
      d = fill_depth_holes(rotate_raster(depth, center, alpha, 0.0f));
      m = rotate_raster(mask, center, alpha, std::uint8_t{0});
      if (mask_area(m) == 0) continue;
    }
    out.rotation_steps = step;
    out.frame_rotation = alpha;
    const CandidateSet g = gen.generate(d, m, cfg, alpha);

    if (cfg.no_msp) {
      out.funnel = {g.size(), 0, 0, 0};
      if (g.empty()) continue;
      const Candidate* best = &g.items.front();
      for (const auto& c : g.items) {
        if (c.score > best->score) best = &c;
      }
      out.frame_grasp = best->box;
      out.grasp = out.selected = unrotate(best->box, center, alpha);
      return out;
    }

    const CandidateSet g1 = calibrate_candidates(g, m, cfg.calibration_step_deg);
    const CandidateSet g2 = filter_self_collision(g1, m);
    const CandidateSet g3 = filter_adjacent_collision(g2, d, cfg.T_d);
    out.funnel = {g.size(), g1.size(), g2.size(), g3.size()};
    if (g3.empty()) continue;

    const Candidate best = select_optimal(g3, d);
    const Refinement ref = refine_grasp(best.box, m, d, cfg.e_c(), k);
    GraspBox final_box = best.box;
    out.refined = false;
    // The refined box is narrower and may shift; it must still pass both collision filters.
    if (ref.refined && passes_self_collision(ref.box, m) && passes_adjacent_collision(ref.box, d, cfg.T_d)) {
      final_box = ref.box;
      out.refined = true;
    }
    out.calibrated = best.calibrated;
    out.frame_grasp = final_box;
    out.selected = unrotate(best.box, center, alpha);
    out.grasp = unrotate(final_box, center, alpha);
    return out;
  }
  throw Error(Errc::kNoGrasp, "no grasp survived any view rotation");
}

}  // namespace pmsgp
