#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pmsgp/geometry.hpp"
#include "pmsgp/imaging.hpp"
#include "pmsgp/msp.hpp"
#include "pmsgp/rng.hpp"

namespace fixture {

using pmsgp::BinaryMask;
using pmsgp::DepthImage;
using pmsgp::GraspBox;
using pmsgp::Pixel;
using pmsgp::Rng;

inline BinaryMask rect_mask(int width, int height, int x0, int y0, int w, int h) {
  BinaryMask m(width, height, 0);
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) m.at(x, y) = 1;
  }
  return m;
}

// Rectangle of size (len, wid) centered at (cx, cy), long axis at `angle`
// counter-clockwise on screen.
inline BinaryMask rotated_rect_mask(int width, int height, double cx, double cy, double len, double wid,
                                    double angle) {
  BinaryMask m(width, height, 0);
  const double ux = std::cos(angle), uy = -std::sin(angle);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double s = dx * ux + dy * uy;
      const double t = -dx * uy + dy * ux;
      if (std::fabs(s) <= len / 2 && std::fabs(t) <= wid / 2) m.at(x, y) = 1;
    }
  }
  return m;
}

inline BinaryMask disc_mask(int width, int height, double cx, double cy, double r) {
  BinaryMask m(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.at(x, y) = 1;
    }
  }
  return m;
}

// Union of a few seeded ellipses and rotated rectangles.
inline BinaryMask blob_mask(std::uint64_t seed, int width = 96, int height = 96) {
  Rng rng(seed);
  BinaryMask m(width, height, 0);
  const int parts = 1 + static_cast<int>(rng.below(4));
  for (int i = 0; i < parts; ++i) {
    const double cx = rng.uniform(0.25, 0.75) * width;
    const double cy = rng.uniform(0.25, 0.75) * height;
    const double a = rng.uniform(4.0, 0.3 * width);
    const double b = rng.uniform(3.0, 0.2 * height);
    const double ang = rng.uniform(0.0, pmsgp::kPi);
    const bool ellipse = rng.uniform() < 0.5;
    const double ux = std::cos(ang), uy = -std::sin(ang);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dx = x - cx, dy = y - cy;
        const double s = (dx * ux + dy * uy) / a;
        const double t = (-dx * uy + dy * ux) / b;
        const bool in = ellipse ? s * s + t * t <= 1.0 : std::fabs(s) <= 1.0 && std::fabs(t) <= 1.0;
        if (in) m.at(x, y) = 1;
      }
    }
  }
  return m;
}

// Ground plane with seeded rectangular plateaus at random heights.
inline DepthImage clutter_depth(std::uint64_t seed, int width = 96, int height = 96) {
  Rng rng(seed);
  DepthImage d(width, height, 0.8f);
  const int n = 3 + static_cast<int>(rng.below(8));
  for (int i = 0; i < n; ++i) {
    const int w = 8 + static_cast<int>(rng.below(40));
    const int h = 8 + static_cast<int>(rng.below(40));
    const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(width - 4)));
    const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(height - 4)));
    const auto v = static_cast<float>(rng.uniform(0.70, 0.79));
    for (int y = y0; y < std::min(height, y0 + h); ++y) {
      for (int x = x0; x < std::min(width, x0 + w); ++x) d.at(x, y) = v;
    }
  }
  return d;
}

inline GraspBox random_box(Rng& rng, int width, int height) {
  return pmsgp::make_grasp_box(rng.uniform(0.0, width - 1.0), rng.uniform(0.0, height - 1.0),
                               rng.uniform(6.0, 60.0), rng.uniform(4.0, 20.0), rng.uniform(0.0, pmsgp::kPi));
}

// Boxes on integer centers with a few repeated depths, so the tie-breaks matter.
inline std::vector<GraspBox> lattice_boxes(Rng& rng, int count, int width, int height) {
  std::vector<GraspBox> out;
  for (int i = 0; i < count; ++i) {
    const double x = static_cast<double>(rng.below(static_cast<std::uint64_t>(width)));
    const double y = static_cast<double>(rng.below(static_cast<std::uint64_t>(height)));
    const double theta = pmsgp::deg_to_rad(30.0 * static_cast<double>(rng.below(6)));
    out.push_back(pmsgp::make_grasp_box(x, y, rng.uniform(6.0, 60.0), 14.0, theta));
  }
  return out;
}

inline pmsgp::CandidateSet as_set(const std::vector<GraspBox>& boxes) {
  pmsgp::CandidateSet s;
  for (std::size_t i = 0; i < boxes.size(); ++i) s.items.push_back({static_cast<int>(i), boxes[i], 0.0, true});
  return s;
}

// Candidate centered on a mask pixel chosen by the seed.
inline GraspBox box_on_mask(Rng& rng, const BinaryMask& m) {
  const auto pixels = pmsgp::mask_pixels(m);
  const Pixel c = pixels[rng.below(pixels.size())];
  return pmsgp::make_grasp_box(c.x, c.y, rng.uniform(20.0, 80.0), rng.uniform(6.0, 16.0),
                               rng.uniform(0.0, pmsgp::kPi));
}

}  // namespace fixture
