#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pmsgp/error.hpp"
#include "pmsgp/geometry.hpp"

namespace pmsgp {

/// Row-major raster of `T`.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error(Errc::kInvalidArgument, "raster dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool in_bounds(Pixel p) const noexcept { return in_bounds(p.x, p.y); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](Pixel p) { return at(p.x, p.y); }
  const T& operator[](Pixel p) const { return at(p.x, p.y); }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Depth in meters; 0 marks an invalid pixel.
using DepthImage = Grid<float>;
// 0 or 1 per pixel.
using BinaryMask = Grid<std::uint8_t>;
// Object id per pixel; 0 is the ground.
using LabelImage = Grid<std::int32_t>;
// Boundary pixels of a mask in row-major order.
using EdgeSet = std::vector<Pixel>;

inline bool is_valid_depth(float d) { return d > 0.0f && std::isfinite(d); }

std::size_t mask_area(const BinaryMask& mask);
std::vector<Pixel> mask_pixels(const BinaryMask& mask);

/// Replaces every invalid pixel with the value of its nearest valid pixel
/// (Euclidean; ties go to the smaller row, then the smaller column).
/// Throws Errc::kUnfillable when the image has no valid pixel.
DepthImage fill_depth_holes(const DepthImage& img);

/// Invalidates pixels outside the closed interval [lo, hi]. Throws Errc::kConfig unless 0 < lo < hi.
DepthImage clamp_depth_range(const DepthImage& img, double lo, double hi);

/// 3x3 Sobel gradient magnitude of the 0/1 raster, with zero padding outside the image.
Grid<float> sobel_magnitude(const BinaryMask& mask);

/// Mask boundary: members with at least one non-member 4-neighbour (the
/// image exterior counts as non-member). Sobel responds on every such pixel
/// except for a few isolated checkerboard patterns, which are kept so that the
/// boundary is always closed. Throws Errc::kEmptyMask on an empty mask.
EdgeSet sobel_edges(const BinaryMask& mask);

// Bitmap form of an edge set, for O(1) membership.
BinaryMask edge_bitmap(const EdgeSet& edge, int width, int height);

/// Depth-gated 4-connected flood fill. A neighbour joins when both pixels are
/// valid and their depths differ by at most `tol`. Throws Errc::kInvalidSeed
/// for out-of-bounds seeds or seeds on invalid depth.
BinaryMask region_grow(const DepthImage& img, std::span<const Pixel> seeds, double tol);

/// Pixelwise OR. Throws Errc::kDimensionMismatch on shape mismatch.
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);

/// Minimum valid depth; ties go to the smallest row, then column.
/// Throws Errc::kNoValidPixel when nothing is valid.
Pixel min_depth_pixel(const DepthImage& img);

/// Pixels visited by a segment sampled at ceil(2 * length) + 1 evenly spaced
/// points (half-pixel spacing), each rounded to the nearest pixel, duplicates
/// removed while keeping first-visit order.
std::vector<Pixel> rasterize_segment(Point2d a, Point2d b);

/// Nearest-neighbour rotation about `center` by `angle` radians clockwise on
/// screen. Samples falling outside the source take `fill`.
template <typename T>
Grid<T> rotate_raster(const Grid<T>& src, Point2d center, double angle, T fill) {
  Grid<T> out(src.width(), src.height(), fill);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      // Inverse map: a screen-clockwise rotation is the standard rotation
      // matrix in (column, row) coordinates, so invert it here.
      const double dx = x - center.x;
      const double dy = y - center.y;
      const Point2d srcp{center.x + c * dx + s * dy, center.y - s * dx + c * dy};
      const Pixel p = round_pixel(srcp);
      if (src.in_bounds(p)) out.at(x, y) = src[p];
    }
  }
  return out;
}

// Maps a point through the same screen-clockwise rotation used by rotate_raster.
Point2d rotate_point(Point2d p, Point2d center, double angle);

}  // namespace pmsgp
