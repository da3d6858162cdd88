#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pmsgp/msp.hpp"

namespace pmsgp {
namespace {

// Largest t on the half-pixel ladder such that every sample c + u * t' with
// t' <= t stays on the mask.
double mask_reach(const BinaryMask& mask, Point2d c, Point2d u) {
  double t = 0.0;
  for (;;) {
    const Pixel p = round_pixel(c + u * (t + 0.5));
    if (!mask.in_bounds(p) || mask[p] == 0) return t;
    t += 0.5;
  }
}

bool corners_inside(const GraspBox& g, int width, int height) {
  for (Point2d c : grasp_box_corners(g)) {
    const Pixel p = round_pixel(c);
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) return false;
  }
  return true;
}

template <typename F>
void for_each_covered_pixel(const GraspBox& g, int width, int height, F&& f) {
  const auto corners = grasp_box_corners(g);
  double x0 = corners[0].x, x1 = corners[0].x, y0 = corners[0].y, y1 = corners[0].y;
  for (Point2d c : corners) {
    x0 = std::min(x0, c.x);
    x1 = std::max(x1, c.x);
    y0 = std::min(y0, c.y);
    y1 = std::max(y1, c.y);
  }
  const int xa = std::max(0, static_cast<int>(std::floor(x0)));
  const int xb = std::min(width - 1, static_cast<int>(std::ceil(x1)));
  const int ya = std::max(0, static_cast<int>(std::floor(y0)));
  const int yb = std::min(height - 1, static_cast<int>(std::ceil(y1)));
  const Point2d u = g.axis();
  const Point2d n = g.finger_axis();
  for (int y = ya; y <= yb; ++y) {
    for (int x = xa; x <= xb; ++x) {
      if (box_contains(g, {static_cast<double>(x), static_cast<double>(y)}, u, n)) f(Pixel{x, y});
    }
  }
}

}  // namespace

std::vector<Pixel> covered_pixels(const GraspBox& g, int width, int height) {
  std::vector<Pixel> out;
  for_each_covered_pixel(g, width, height, [&](Pixel p) { out.push_back(p); });
  return out;
}

double mask_coverage(const GraspBox& g, const BinaryMask& mask) {
  std::size_t total = 0;
  std::size_t hit = 0;
  for_each_covered_pixel(g, mask.width(), mask.height(), [&](Pixel p) {
    ++total;
    hit += mask[p] != 0;
  });
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

std::vector<Pixel> short_side_pixels(const GraspBox& g) {
  const auto c = grasp_box_corners(g);
  std::vector<Pixel> out = rasterize_segment(c[1], c[2]);
  const auto other = rasterize_segment(c[3], c[0]);
  out.insert(out.end(), other.begin(), other.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CandidateSet generate_baseline_candidates(const DepthImage& depth, const BinaryMask& mask,
                                          const PipelineConfig& cfg) {
  if (!depth.same_shape(mask)) throw Error(Errc::kDimensionMismatch, "depth and mask differ in size");
  CandidateSet out;
  if (mask_area(mask) == 0) return out;
  const BinaryMask edge = edge_bitmap(sobel_edges(mask), mask.width(), mask.height());

  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) == 0 || edge.at(x, y) != 0) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return out;

  const int step = cfg.grid_step;
  for (int y = y0; y <= y1; y += step) {
    for (int x = x0; x <= x1; x += step) {
      if (mask.at(x, y) == 0 || edge.at(x, y) != 0) continue;
      const float d = depth.at(x, y);
      if (!is_valid_depth(d)) continue;
      const Point2d c{static_cast<double>(x), static_cast<double>(y)};
      for (int k = 0; k < 6; ++k) {
        const double theta = deg_to_rad(30.0 * k);
        const Point2d u{std::cos(theta), -std::sin(theta)};
        const double reach = std::max(mask_reach(mask, c, u), mask_reach(mask, c, u * -1.0));
        const double w = 2.0 * reach + 1.0 + 2.0 * cfg.width_pad;
        if (w * d / cfg.intrinsics.fx > cfg.gripper.max_opening) continue;
        const GraspBox g = make_grasp_box(c.x, c.y, w, cfg.finger_thickness_px, theta);
        if (!corners_inside(g, mask.width(), mask.height())) continue;
        out.items.push_back({static_cast<int>(out.items.size()), g, mask_coverage(g, mask), true});
      }
    }
  }
  return out;
}

CandidateSet BaselineGenerator::generate(const DepthImage& depth, const BinaryMask& mask,
                                         const PipelineConfig& cfg, double rotation) const {
  CandidateSet out = generate_baseline_candidates(depth, mask, cfg);
  out.rotation = rotation;
  return out;
}

FileGenerator::FileGenerator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kParse, path + ": " + e.what());
  }
  if (!j.is_array()) throw Error(Errc::kParse, path + ": expected a JSON array of candidates");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = path + ": candidate " + std::to_string(i);
    try {
      const GraspBox g = make_grasp_box(e.at("x").get<double>(), e.at("y").get<double>(),
                                        e.at("w").get<double>(), e.at("h").get<double>(),
                                        deg_to_rad(e.at("theta_deg").get<double>()));
      items_.push_back({static_cast<int>(i), g, e.value("score", 0.0), true});
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::kParse, where + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(Errc::kParse, where + ": " + ex.what());
    }
  }
}

CandidateSet FileGenerator::generate(const DepthImage& depth, const BinaryMask& mask, const PipelineConfig&,
                                     double rotation) const {
  if (!depth.same_shape(mask)) throw Error(Errc::kDimensionMismatch, "depth and mask differ in size");
  CandidateSet out;
  out.rotation = rotation;
  const Point2d center = raster_center(mask.width(), mask.height());
  for (const auto& c : items_) {
    Candidate moved = c;
    const Point2d p = rotate_point(c.box.center(), center, rotation);
    moved.box = make_grasp_box(p.x, p.y, c.box.w, c.box.h, c.box.theta - rotation);
    if (!corners_inside(moved.box, mask.width(), mask.height())) continue;
    moved.id = static_cast<int>(out.items.size());
    out.items.push_back(moved);
  }
  return out;
}

std::unique_ptr<CandidateGenerator> make_generator(const PipelineConfig& cfg) {
  if (cfg.generator == "baseline") return std::make_unique<BaselineGenerator>();
  if (cfg.generator == "file") return std::make_unique<FileGenerator>(cfg.candidates_file);
  throw Error(Errc::kConfig, "unknown generator '" + cfg.generator + "'");
}

}  // namespace pmsgp
