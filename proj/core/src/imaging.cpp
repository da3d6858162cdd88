#include "pmsgp/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace pmsgp {

std::size_t mask_area(const BinaryMask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.values().begin(), mask.values().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

std::vector<Pixel> mask_pixels(const BinaryMask& mask) {
  std::vector<Pixel> out;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) out.push_back({x, y});
    }
  }
  return out;
}

DepthImage fill_depth_holes(const DepthImage& img) {
  const int w = img.width();
  const int h = img.height();
  bool any_valid = false;
  bool any_invalid = false;
  for (float v : img.values()) {
    (is_valid_depth(v) ? any_valid : any_invalid) = true;
  }
  if (!any_valid) throw Error(Errc::kUnfillable, "depth image has no valid pixel to fill from");
  if (!any_invalid) return img;

  // Nearest valid row at or above / at or below each pixel in its column, -1 if none.
  // The nearest valid pixel overall is the nearest one in some column.
  Grid<int> up(w, h, -1);
  Grid<int> down(w, h, -1);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (is_valid_depth(img.at(x, y))) last = y;
      up.at(x, y) = last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (is_valid_depth(img.at(x, y))) last = y;
      down.at(x, y) = last;
    }
  }

  DepthImage out = img;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (is_valid_depth(img.at(x, y))) continue;
      long best_d2 = std::numeric_limits<long>::max();
      Pixel best{-1, -1};
      auto consider = [&](int qx, int qy) {
        if (qy < 0) return;
        const long dx = qx - x;
        const long dy = qy - y;
        const long d2 = dx * dx + dy * dy;
        const Pixel q{qx, qy};
        if (d2 < best_d2 || (d2 == best_d2 && q < best)) {
          best_d2 = d2;
          best = q;
        }
      };
      for (int dx = 0; static_cast<long>(dx) * dx <= best_d2 && (x - dx >= 0 || x + dx < w); ++dx) {
        for (int qx : {x - dx, x + dx}) {
          if (qx < 0 || qx >= w || (dx == 0 && qx != x)) continue;
          consider(qx, up.at(qx, y));
          consider(qx, down.at(qx, y));
        }
      }
      out.at(x, y) = img[best];
    }
  }
  return out;
}

DepthImage clamp_depth_range(const DepthImage& img, double lo, double hi) {
  if (!(lo > 0.0) || !(lo < hi)) {
    throw Error(Errc::kConfig, "depth clamp requires 0 < lo < hi");
  }
  DepthImage out = img;
  for (float& v : out.values()) {
    if (!is_valid_depth(v)) {
      v = 0.0f;
      continue;
    }
    const double d = v;
    if (d < lo || d > hi) v = 0.0f;
  }
  return out;
}

Grid<float> sobel_magnitude(const BinaryMask& mask) {
  Grid<float> out(mask.width(), mask.height(), 0.0f);
  auto m = [&](int x, int y) -> int { return mask.in_bounds(x, y) && mask.at(x, y) ? 1 : 0; };
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int gx = (m(x + 1, y - 1) + 2 * m(x + 1, y) + m(x + 1, y + 1)) -
                     (m(x - 1, y - 1) + 2 * m(x - 1, y) + m(x - 1, y + 1));
      const int gy = (m(x - 1, y + 1) + 2 * m(x, y + 1) + m(x + 1, y + 1)) -
                     (m(x - 1, y - 1) + 2 * m(x, y - 1) + m(x + 1, y - 1));
      out.at(x, y) = static_cast<float>(std::hypot(gx, gy));
    }
  }
  return out;
}

EdgeSet sobel_edges(const BinaryMask& mask) {
  EdgeSet edge;
  auto member = [&](int x, int y) { return mask.in_bounds(x, y) && mask.at(x, y) != 0; };
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!member(x, y)) continue;
      if (!member(x - 1, y) || !member(x + 1, y) || !member(x, y - 1) || !member(x, y + 1)) {
        edge.push_back({x, y});
      }
    }
  }
  if (edge.empty()) throw Error(Errc::kEmptyMask, "cannot extract the edge of an empty mask");
  return edge;
}

BinaryMask edge_bitmap(const EdgeSet& edge, int width, int height) {
  BinaryMask out(width, height, 0);
  for (Pixel p : edge) {
    if (out.in_bounds(p)) out[p] = 1;
  }
  return out;
}

BinaryMask region_grow(const DepthImage& img, std::span<const Pixel> seeds, double tol) {
  if (seeds.empty()) throw Error(Errc::kInvalidSeed, "region growing needs at least one seed");
  BinaryMask out(img.width(), img.height(), 0);
  std::vector<Pixel> ordered(seeds.begin(), seeds.end());
  std::sort(ordered.begin(), ordered.end());
  std::deque<Pixel> queue;
  for (Pixel s : ordered) {
    if (!img.in_bounds(s) || !is_valid_depth(img[s])) {
      throw Error(Errc::kInvalidSeed, "region growing seed (" + std::to_string(s.x) + ", " +
                                          std::to_string(s.y) + ") has no valid depth");
    }
    if (!out[s]) {
      out[s] = 1;
      queue.push_back(s);
    }
  }
  constexpr Pixel kSteps[4] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};
  while (!queue.empty()) {
    const Pixel p = queue.front();
    queue.pop_front();
    const double dp = img[p];
    for (Pixel step : kSteps) {
      const Pixel q{p.x + step.x, p.y + step.y};
      if (!img.in_bounds(q) || out[q] || !is_valid_depth(img[q])) continue;
      if (std::fabs(static_cast<double>(img[q]) - dp) <= tol) {
        out[q] = 1;
        queue.push_back(q);
      }
    }
  }
  return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(Errc::kDimensionMismatch, "mask union needs equal shapes");
  BinaryMask out = a;
  auto dst = out.values();
  auto src = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (dst[i] || src[i]) ? 1 : 0;
  return out;
}

Pixel min_depth_pixel(const DepthImage& img) {
  Pixel best{-1, -1};
  float best_d = std::numeric_limits<float>::infinity();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const float d = img.at(x, y);
      if (is_valid_depth(d) && d < best_d) {
        best_d = d;
        best = {x, y};
      }
    }
  }
  if (best.x < 0) throw Error(Errc::kNoValidPixel, "depth image has no valid pixel");
  return best;
}

std::vector<Pixel> rasterize_segment(Point2d a, Point2d b) {
  const double len = (b - a).norm();
  const int n = static_cast<int>(std::ceil(2.0 * len)) + 1;
  std::vector<Pixel> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    const Pixel p = round_pixel(a + (b - a) * t);
    // Rounded samples along a line are monotone per axis, so repeats are adjacent.
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  return out;
}

Point2d rotate_point(Point2d p, Point2d center, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return {center.x + c * dx - s * dy, center.y + s * dx + c * dy};
}

}  // namespace pmsgp
