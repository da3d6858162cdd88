#include <algorithm>
#include <cmath>

#include "pmsgp/msp.hpp"

namespace pmsgp {

EdgeLookup::EdgeLookup(std::span<const Pixel> edge) {
  if (edge.empty()) return;
  int x1 = edge.front().x, y1 = edge.front().y;
  x0_ = x1;
  y0_ = y1;
  for (Pixel p : edge) {
    x0_ = std::min(x0_, p.x);
    y0_ = std::min(y0_, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  bits_ = BinaryMask(x1 - x0_ + 1, y1 - y0_ + 1, 0);
  for (Pixel p : edge) bits_.at(p.x - x0_, p.y - y0_) = 1;
  empty_ = false;

  // Two-pass chamfer with unit 8-neighbour steps gives the exact Chebyshev distance.
  const int w = bits_.width();
  const int h = bits_.height();
  dist_ = Grid<int>(w, h, w + h);
  for (Pixel p : edge) dist_.at(p.x - x0_, p.y - y0_) = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int& d = dist_.at(x, y);
      for (auto [ox, oy] : {std::pair{-1, -1}, {0, -1}, {1, -1}, {-1, 0}}) {
        if (dist_.in_bounds(x + ox, y + oy)) d = std::min(d, dist_.at(x + ox, y + oy) + 1);
      }
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      int& d = dist_.at(x, y);
      for (auto [ox, oy] : {std::pair{1, 1}, {0, 1}, {-1, 1}, {1, 0}}) {
        if (dist_.in_bounds(x + ox, y + oy)) d = std::min(d, dist_.at(x + ox, y + oy) + 1);
      }
    }
  }
}

namespace {

// First and last edge pixel met walking from a to b, sampled as rasterize_segment does.
// Consecutive samples move at most half a pixel per axis and rounding adds at
// most one pixel, so from a pixel at Chebyshev distance D to the edge the next
// 2 D - 3 samples cannot reach it.
std::optional<std::pair<Pixel, Pixel>> end_hits(Point2d a, Point2d b, const EdgeLookup& edge) {
  const Point2d d = b - a;
  const int n = static_cast<int>(std::ceil(2.0 * d.norm())) + 1;
  auto at = [&](int k) { return round_pixel(n == 1 ? a : a + d * (static_cast<double>(k) / (n - 1))); };
  auto skip = [&](Pixel p) { return std::max(1, 2 * edge.distance(p) - 2); };
  int k0 = 0;
  Pixel first;
  for (;;) {
    if (k0 >= n) return std::nullopt;
    first = at(k0);
    if (edge.contains(first)) break;
    k0 += skip(first);
  }
  int k1 = n - 1;
  Pixel last;
  for (;;) {
    last = at(k1);
    if (edge.contains(last)) break;
    k1 -= skip(last);
    // The forward scan already found a hit at k0, so this one stops there at the latest.
    if (k1 <= k0) {
      k1 = k0;
      last = first;
      break;
    }
  }
  if (first == last) return std::nullopt;
  return std::make_pair(first, last);
}

std::optional<Crossings> crossings_of(const std::array<Point2d, 4>& c, const EdgeLookup& edge) {
  const auto upper = end_hits(c[0], c[1], edge);
  if (!upper) return std::nullopt;
  const auto lower = end_hits(c[3], c[2], edge);
  if (!lower) return std::nullopt;
  return Crossings{upper->first, upper->second, lower->first, lower->second};
}

double angle_between(Point2d a, Point2d b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

std::optional<Crossings> long_side_crossings(const GraspBox& g, const EdgeLookup& edge) {
  return crossings_of(grasp_box_corners(g), edge);
}

std::optional<double> gac_score(const GraspBox& g, const EdgeLookup& edge) {
  const auto c = grasp_box_corners(g);
  const auto x = crossings_of(c, edge);
  if (!x) return std::nullopt;
  const Point2d v_pl = to_point(x->bl) - to_point(x->tl);
  const Point2d v_pr = to_point(x->br) - to_point(x->tr);
  if (v_pl.norm() == 0.0 || v_pr.norm() == 0.0) return std::nullopt;
  const Point2d v_gu = c[1] - c[0];
  const double t1 = angle_between(v_pl, v_gu);
  const double t2 = angle_between(v_pr, v_gu);
  return std::fabs(t1 - kPi / 2.0) + std::fabs(t2 - kPi / 2.0);
}

Calibration calibrate_angle(const GraspBox& g, const EdgeLookup& edge, double step_deg) {
  if (edge.empty()) throw Error(Errc::kEmptyMask, "angle calibration needs a non-empty edge");
  if (!(step_deg > 0.0)) throw Error(Errc::kInvalidArgument, "calibration step must be > 0");
  Calibration best{g, 0.0, 0.0, false};
  const int steps = static_cast<int>(std::llround(360.0 / step_deg));
  for (int i = 0; i < steps; ++i) {
    const double r = deg_to_rad(step_deg * i);
    const GraspBox turned = make_grasp_box(g.x, g.y, g.w, g.h, g.theta - r);
    const auto score = gac_score(turned, edge);
    if (!score) continue;
    if (!best.calibrated || *score < best.score - 1e-9) best = {turned, r, *score, true};
  }
  return best;
}

Calibration calibrate_angle(const GraspBox& g, std::span<const Pixel> edge, double step_deg) {
  return calibrate_angle(g, EdgeLookup(edge), step_deg);
}

CandidateSet calibrate_candidates(const CandidateSet& g, const BinaryMask& mask, double step_deg) {
  CandidateSet out;
  out.stage = Stage::kGPrime;
  out.rotation = g.rotation;
  if (g.empty()) return out;
  const EdgeLookup edge(sobel_edges(mask));
  out.items.reserve(g.size());
  for (const auto& c : g.items) {
    const Calibration cal = calibrate_angle(c.box, edge, step_deg);
    out.items.push_back({c.id, cal.box, c.score, cal.calibrated});
  }
  return out;
}

}  // namespace pmsgp
