#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmsgp/config.hpp"
#include "pmsgp/imaging.hpp"

namespace pmsgp {

enum class Stage { kG, kGPrime, kGDouble, kGTriple };

struct Candidate {
  int id = 0;  // index in the generated set, kept through every stage
  GraspBox box;
  double score = 0.0;
  bool calibrated = true;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateSet {
  Stage stage = Stage::kG;
  std::vector<Candidate> items;
  double rotation = 0.0;  // clockwise view rotation of the frame the boxes live in

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }
};

/// Produces stage-G candidates inside the crop. `rotation` is the clockwise
/// rotation already applied to `depth` and `mask` about the crop center.
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual CandidateSet generate(const DepthImage& depth, const BinaryMask& mask, const PipelineConfig& cfg,
                                double rotation) const = 0;
  virtual std::string name() const = 0;
};

class BaselineGenerator final : public CandidateGenerator {
 public:
  CandidateSet generate(const DepthImage& depth, const BinaryMask& mask, const PipelineConfig& cfg,
                        double rotation) const override;
  std::string name() const override { return "baseline"; }
};

/// Candidates imported from a JSON array of {x, y, w, h, theta_deg, score}
/// given in the unrotated crop frame.
class FileGenerator final : public CandidateGenerator {
 public:
  explicit FileGenerator(const std::string& path);
  explicit FileGenerator(std::vector<Candidate> items) : items_(std::move(items)) {}
  CandidateSet generate(const DepthImage& depth, const BinaryMask& mask, const PipelineConfig& cfg,
                        double rotation) const override;
  std::string name() const override { return "file"; }

 private:
  std::vector<Candidate> items_;
};

std::unique_ptr<CandidateGenerator> make_generator(const PipelineConfig& cfg);

/// Lattice of cfg.grid_step anchored at the top-left of the mask interior's
/// bounding box, six orientations per lattice point. Width spans the mask
/// along the opening axis plus 2 * cfg.width_pad; height is the finger thickness.
/// Candidates wider than the gripper or reaching outside the crop are dropped.
CandidateSet generate_baseline_candidates(const DepthImage& depth, const BinaryMask& mask,
                                          const PipelineConfig& cfg);

// In-bounds pixels whose centers lie inside the box, row-major.
std::vector<Pixel> covered_pixels(const GraspBox& g, int width, int height);

// Fraction of the pixels covered by the box that belong to the mask.
double mask_coverage(const GraspBox& g, const BinaryMask& mask);

// Rasterized pixels of both short sides (TR->BR, BL->TL), duplicates removed.
std::vector<Pixel> short_side_pixels(const GraspBox& g);

/// Constant-time membership for an edge set, plus a lower bound on the
/// Chebyshev distance from any pixel to the nearest edge pixel.
class EdgeLookup {
 public:
  explicit EdgeLookup(std::span<const Pixel> edge);
  bool contains(Pixel p) const noexcept {
    const int x = p.x - x0_;
    const int y = p.y - y0_;
    return !empty_ && bits_.in_bounds(x, y) && bits_.at(x, y) != 0;
  }
  // Exact inside the edge's bounding box, the distance to that box outside it.
  int distance(Pixel p) const noexcept {
    const int x = p.x - x0_;
    const int y = p.y - y0_;
    if (dist_.in_bounds(x, y)) return dist_.at(x, y);
    const int dx = x < 0 ? -x : x - (dist_.width() - 1);
    const int dy = y < 0 ? -y : y - (dist_.height() - 1);
    return std::max(dx, dy);
  }
  bool empty() const noexcept { return empty_; }

 private:
  int x0_ = 0;
  int y0_ = 0;
  BinaryMask bits_;
  Grid<int> dist_;
  bool empty_ = true;
};

/// Where the two long sides of `g` cross the edge: the crossing nearest each
/// long-side endpoint. Absent when either side has fewer than two crossings.
struct Crossings {
  Pixel tl, tr, bl, br;
};
std::optional<Crossings> long_side_crossings(const GraspBox& g, const EdgeLookup& edge);

// |theta' - pi/2| + |theta'' - pi/2| for the box as given; absent if the crossings are missing.
std::optional<double> gac_score(const GraspBox& g, const EdgeLookup& edge);

struct Calibration {
  GraspBox box;
  double rotation = 0.0;  // R*, radians clockwise
  double score = 0.0;
  bool calibrated = false;
};

/// Tries every clockwise rotation R = 0, step, 2 step, ... below a full turn
/// and keeps the lowest score (ties to the smaller R). The width never changes.
/// Returns g unchanged and uncalibrated when no rotation has four crossings.
/// Throws Errc::kEmptyMask for an empty edge.
Calibration calibrate_angle(const GraspBox& g, const EdgeLookup& edge, double step_deg = 2.0);
Calibration calibrate_angle(const GraspBox& g, std::span<const Pixel> edge, double step_deg = 2.0);

// Self-collision filter: short sides clear of the mask and inside the crop, center on the mask.
bool passes_self_collision(const GraspBox& g, const BinaryMask& mask);
// Adjacent-collision filter: |d(p) - d(c)| <= T_d over the short-side pixels; `depth` must be hole-filled.
bool passes_adjacent_collision(const GraspBox& g, const DepthImage& depth, double T_d);

CandidateSet calibrate_candidates(const CandidateSet& g, const BinaryMask& mask, double step_deg);
CandidateSet filter_self_collision(const CandidateSet& g, const BinaryMask& mask);
CandidateSet filter_adjacent_collision(const CandidateSet& g, const DepthImage& depth, double T_d);

/// Smallest center depth; ties to the smaller center (row, then column),
/// then the smaller angle, then the smaller id. Throws Errc::kNoGrasp on an empty set.
Candidate select_optimal(const CandidateSet& g, const DepthImage& depth);

struct RefinementRectangle {
  Point2d center;
  double width = 0.0;   // along the opening axis, pixels
  double extent = 0.0;  // along the finger axis, pixels
  double theta = 0.0;
};

struct Refinement {
  GraspBox box;
  RefinementRectangle rect;
  bool refined = false;
};

/// Width refinement: the theta-aligned bounding rectangle of mask pixels inside the
/// box sets the new center and width; the width grows by e_c converted to
/// pixels at the center depth. An empty overlap returns g unrefined.
Refinement refine_grasp(const GraspBox& g, const BinaryMask& mask, const DepthImage& depth, double e_c,
                        const CameraIntrinsics& k);

struct FunnelSizes {
  std::size_t g = 0, g1 = 0, g2 = 0, g3 = 0;

  friend bool operator==(const FunnelSizes&, const FunnelSizes&) = default;
};

struct MspResult {
  GraspBox grasp;     // g*_f in the unrotated crop frame
  GraspBox selected;  // g* in the unrotated crop frame
  int rotation_steps = 0;
  double frame_rotation = 0.0;
  GraspBox frame_grasp;  // g*_f in the rotated frame it was chosen in
  FunnelSizes funnel;
  bool calibrated = false;
  bool refined = false;
};

/// Full funnel with adaptive view rotation. `depth` must be hole-filled.
/// Throws Errc::kEmptyMask for an empty mask and Errc::kNoGrasp when every
/// rotation empties the funnel.
MspResult run_msp(const DepthImage& depth, const BinaryMask& mask, const CandidateGenerator& gen,
                  const PipelineConfig& cfg, const CameraIntrinsics& k);

// Center of rotation used for the adaptive view rotation of a crop.
Point2d raster_center(int width, int height);

}  // namespace pmsgp
