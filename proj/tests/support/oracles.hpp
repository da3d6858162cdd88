#pragma once

// Slow, direct implementations of the library's definitions. Each one is
// written from the definition alone and shares no code with the library
// beyond the plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pmsgp/geometry.hpp"
#include "pmsgp/imaging.hpp"
#include "pmsgp/msp.hpp"

namespace oracle {

using pmsgp::BinaryMask;
using pmsgp::DepthImage;
using pmsgp::GraspBox;
using pmsgp::Pixel;
using pmsgp::Point2d;

inline bool valid(float d) { return d > 0.0f && std::isfinite(d); }

// Nearest valid pixel by exhaustive scan, ties to (row, column).
inline DepthImage fill(const DepthImage& img) {
  DepthImage out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (valid(img.at(x, y))) continue;
      long best = std::numeric_limits<long>::max();
      float v = 0.0f;
      for (int yy = 0; yy < img.height(); ++yy) {
        for (int xx = 0; xx < img.width(); ++xx) {
          if (!valid(img.at(xx, yy))) continue;
          const long d2 = static_cast<long>(xx - x) * (xx - x) + static_cast<long>(yy - y) * (yy - y);
          if (d2 < best) {
            best = d2;
            v = img.at(xx, yy);
          }
        }
      }
      out.at(x, y) = v;
    }
  }
  return out;
}

// Members with a non-member (or out-of-image) 4-neighbour, row-major.
inline std::vector<Pixel> boundary(const BinaryMask& m) {
  std::vector<Pixel> out;
  auto member = [&](int x, int y) { return m.in_bounds(x, y) && m.at(x, y) != 0; };
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!member(x, y)) continue;
      if (!member(x - 1, y) || !member(x + 1, y) || !member(x, y - 1) || !member(x, y + 1)) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

// Fixed point of "a valid pixel 4-adjacent to a member with depth within tol joins".
inline BinaryMask grow(const DepthImage& img, const std::vector<Pixel>& seeds, double tol) {
  BinaryMask m(img.width(), img.height(), 0);
  for (Pixel s : seeds) m[s] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (m.at(x, y) != 0 || !valid(img.at(x, y))) continue;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
          if (!img.in_bounds(nx[k], ny[k]) || m.at(nx[k], ny[k]) == 0) continue;
          if (std::fabs(static_cast<double>(img.at(x, y)) - img.at(nx[k], ny[k])) <= tol) {
            m.at(x, y) = 1;
            changed = true;
            break;
          }
        }
      }
    }
  }
  return m;
}

inline long dist2(Pixel a, Pixel b) {
  return static_cast<long>(a.x - b.x) * (a.x - b.x) + static_cast<long>(a.y - b.y) * (a.y - b.y);
}

// Farthest pair over i != j, ties to the lexicographically smallest ordered pair.
inline std::pair<Pixel, Pixel> farthest(const std::vector<Pixel>& pts) {
  long best = -1;
  std::pair<Pixel, Pixel> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      Pixel a = pts[i], b = pts[j];
      if (b < a) std::swap(a, b);
      const long d = dist2(a, b);
      if (d > best || (d == best && std::make_pair(a, b) < out)) {
        best = d;
        out = {a, b};
      }
    }
  }
  return out;
}

// Pixels within sqrt(2)/2 of the perpendicular bisector of (a, b). Squared
// form: every quantity is a small multiple of 1/4, so doubles are exact and
// pixels lying exactly at the band edge are kept.
inline std::vector<Pixel> near_bisector(const std::vector<Pixel>& edge, Pixel a, Pixel b) {
  const double mx = 0.5 * (a.x + b.x);
  const double my = 0.5 * (a.y + b.y);
  const double ux = b.x - a.x;
  const double uy = b.y - a.y;
  std::vector<Pixel> out;
  for (Pixel p : edge) {
    const double along = (p.x - mx) * ux + (p.y - my) * uy;
    if (along * along <= 0.5 * (ux * ux + uy * uy)) out.push_back(p);
  }
  return out;
}

// Pixels visited by the segment sampled every half pixel, rounded half away from zero.
inline std::vector<Pixel> segment_pixels(Point2d a, Point2d b) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int n = static_cast<int>(std::ceil(2.0 * len)) + 1;
  std::vector<Pixel> out;
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    const Pixel p{static_cast<int>(std::lround(a.x + (b.x - a.x) * t)),
                  static_cast<int>(std::lround(a.y + (b.y - a.y) * t))};
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

// Corners TL, TR, BR, BL from the rotation matrix.
inline std::array<Point2d, 4> corners(const GraspBox& g) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  std::array<Point2d, 4> out;
  const double lx[4] = {-g.w / 2, g.w / 2, g.w / 2, -g.w / 2};
  const double ly[4] = {-g.h / 2, -g.h / 2, g.h / 2, g.h / 2};
  for (int i = 0; i < 4; ++i) {
    // Local x runs along (cos, -sin), local y along (sin, cos) in (column, row).
    out[i] = {g.x + lx[i] * c + ly[i] * s, g.y - lx[i] * s + ly[i] * c};
  }
  return out;
}

inline std::vector<Pixel> short_sides(const GraspBox& g) {
  const auto c = corners(g);
  std::vector<Pixel> out = segment_pixels(c[1], c[2]);
  for (Pixel p : segment_pixels(c[3], c[0])) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Pixel center_pixel(const GraspBox& g) {
  return {static_cast<int>(std::lround(g.x)), static_cast<int>(std::lround(g.y))};
}

// Self-collision: center pixel on the mask, short sides inside the image and off the mask.
inline bool self_ok(const GraspBox& g, const BinaryMask& m) {
  const Pixel c = center_pixel(g);
  if (!m.in_bounds(c) || m[c] == 0) return false;
  for (Pixel p : short_sides(g)) {
    if (!m.in_bounds(p) || m[p] != 0) return false;
  }
  return true;
}

// Adjacent collision: every short-side pixel within T_d of the center depth.
inline bool adjacent_ok(const GraspBox& g, const DepthImage& d, double T_d) {
  const Pixel c = center_pixel(g);
  if (!d.in_bounds(c)) return false;
  if (!valid(d[c])) return false;
  const double dc = d[c];
  for (Pixel p : short_sides(g)) {
    if (!d.in_bounds(p) || !valid(d[p])) return false;
    if (std::fabs(static_cast<double>(d[p]) - dc) > T_d) return false;
  }
  return true;
}

// Linear scan for the smallest (center depth, row, column, theta); unusable centers rank last.
inline std::size_t select(const std::vector<GraspBox>& boxes, const DepthImage& d) {
  auto depth_at = [&](const GraspBox& g) {
    const Pixel c = center_pixel(g);
    return d.in_bounds(c) && valid(d[c]) ? static_cast<double>(d[c]) : std::numeric_limits<double>::infinity();
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    const GraspBox& a = boxes[i];
    const GraspBox& b = boxes[best];
    const double da = depth_at(a), db = depth_at(b);
    bool better = false;
    if (da != db) {
      better = da < db;
    } else if (a.y != b.y) {
      better = a.y < b.y;
    } else if (a.x != b.x) {
      better = a.x < b.x;
    } else {
      better = a.theta < b.theta;
    }
    if (better) best = i;
  }
  return best;
}

// Angle between two vectors, in [0, pi].
inline double angle_between(double ax, double ay, double bx, double by) {
  const double c = (ax * bx + ay * by) / (std::sqrt(ax * ax + ay * ay) * std::sqrt(bx * bx + by * by));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Score of a box against an edge set: crossings nearest each long-side end.
inline std::optional<double> score(const GraspBox& g, const std::set<Pixel>& edge) {
  const auto c = corners(g);
  auto crossings = [&](Point2d a, Point2d b) -> std::optional<std::pair<Pixel, Pixel>> {
    std::vector<Pixel> hits;
    for (Pixel p : segment_pixels(a, b)) {
      if (edge.count(p) != 0) hits.push_back(p);
    }
    if (hits.size() < 2) return std::nullopt;
    return std::make_pair(hits.front(), hits.back());
  };
  const auto top = crossings(c[0], c[1]);
  const auto bottom = crossings(c[3], c[2]);
  if (!top || !bottom) return std::nullopt;
  const double ux = c[1].x - c[0].x;
  const double uy = c[1].y - c[0].y;
  const auto [tl, tr] = *top;
  const auto [bl, br] = *bottom;
  const double a1 = angle_between(bl.x - tl.x, bl.y - tl.y, ux, uy);
  const double a2 = angle_between(br.x - tr.x, br.y - tr.y, ux, uy);
  if (tl == bl || tr == br) return std::nullopt;
  return std::fabs(a1 - pmsgp::kPi / 2) + std::fabs(a2 - pmsgp::kPi / 2);
}

struct Calibrated {
  GraspBox box;
  int step = 0;  // R* = step * step_deg
  double score = 0.0;
  bool calibrated = false;
};

// Every clockwise rotation of the box about its center; lowest score, ties to the smaller R.
inline Calibrated calibrate(const GraspBox& g, const std::vector<Pixel>& edge, double step_deg) {
  const std::set<Pixel> set(edge.begin(), edge.end());
  const int steps = static_cast<int>(std::lround(360.0 / step_deg));
  Calibrated best{g, 0, 0.0, false};
  for (int k = 0; k < steps; ++k) {
    GraspBox r = g;
    r.theta = pmsgp::normalize_half_turn(g.theta - pmsgp::deg_to_rad(k * step_deg));
    const auto s = score(r, set);
    if (!s) continue;
    if (!best.calibrated || *s < best.score - 1e-9) best = {r, k, *s, true};
  }
  return best;
}

// Extents of covered mask pixels projected on the box axes.
struct OrientedExtent {
  double smin, smax, tmin, tmax;
  int count = 0;
};

inline OrientedExtent oriented_extent(const GraspBox& g, const BinaryMask& m) {
  const double ux = std::cos(g.theta), uy = -std::sin(g.theta);
  const double nx = std::sin(g.theta), ny = std::cos(g.theta);
  OrientedExtent e{1e300, -1e300, 1e300, -1e300, 0};
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.at(x, y) == 0) continue;
      const double s = (x - g.x) * ux + (y - g.y) * uy;
      const double t = (x - g.x) * nx + (y - g.y) * ny;
      if (std::fabs(s) > g.w / 2 + 1e-9 || std::fabs(t) > g.h / 2 + 1e-9) continue;
      e.smin = std::min(e.smin, s);
      e.smax = std::max(e.smax, s);
      e.tmin = std::min(e.tmin, t);
      e.tmax = std::max(e.tmax, t);
      ++e.count;
    }
  }
  return e;
}

}  // namespace oracle
