#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmsgp/config.hpp"
#include "pmsgp/imaging.hpp"
#include "pmsgp/scene.hpp"

namespace pmsgp {

/// What a segmenter may look at. `depth` is clamped and hole-filled; `labels`
/// is the simulator's ground truth (used only by the oracle-backed segmenters).
struct SegmentInput {
  const DepthImage& depth;
  const LabelImage& labels;
  std::uint64_t seed = 0;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  // Must return a mask with the view's dimensions. Safe for concurrent calls.
  virtual BinaryMask segment(const SegmentInput& in, std::span<const Pixel> prompts) const = 0;
  virtual std::string name() const = 0;
};

class OracleSegmenter final : public Segmenter {
 public:
  BinaryMask segment(const SegmentInput& in, std::span<const Pixel> prompts) const override;
  std::string name() const override { return "oracle"; }
};

class NoisySegmenter final : public Segmenter {
 public:
  explicit NoisySegmenter(double corruption);
  BinaryMask segment(const SegmentInput& in, std::span<const Pixel> prompts) const override;
  std::string name() const override { return "noisy"; }

 private:
  double corruption_;
};

// Depth-only baseline: region growing from every prompt.
class RegionGrowSegmenter final : public Segmenter {
 public:
  explicit RegionGrowSegmenter(double tol);
  BinaryMask segment(const SegmentInput& in, std::span<const Pixel> prompts) const override;
  std::string name() const override { return "region-grow"; }

 private:
  double tol_;
};

// Returns a mask produced offline (PMBM file), whatever the prompts.
class MaskFileSegmenter final : public Segmenter {
 public:
  explicit MaskFileSegmenter(const std::string& path);
  explicit MaskFileSegmenter(BinaryMask mask) : mask_(std::move(mask)) {}
  BinaryMask segment(const SegmentInput& in, std::span<const Pixel> prompts) const override;
  std::string name() const override { return "file"; }

 private:
  BinaryMask mask_;
};

std::unique_ptr<Segmenter> make_segmenter(const PipelineConfig& cfg);

/// One camera move of the alignment. `target` is the min-depth pixel in the
/// view that was searched; `dx`, `dy` the world translation actually applied.
struct AlignStep {
  bool crop = false;
  Pixel target;
  double dx = 0.0;
  double dy = 0.0;
  bool clamped = false;

  friend bool operator==(const AlignStep&, const AlignStep&) = default;
};

struct AlignedView {
  VirtualCamera camera;
  DepthImage depth;  // crop as sensed (noise applied, not clamped or filled)
  LabelImage labels;
  Pixel crop_origin;
  Pixel prompt;  // first prompt in crop pixels
  std::vector<AlignStep> trace;
};

struct AlignOptions {
  Workspace bounds;  // camera travel limits
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  // Depth range searched for the minimum; readings outside it are ignored.
  double depth_lo = 0.10;
  double depth_hi = 1.5;
};

AlignOptions align_options(const PipelineConfig& cfg, std::uint64_t seed);

/// One alignment on the full view, then two on centered crops. The prompt is
/// the crop center. Throws Errc::kNoValidPixel if a view holds no valid depth.
AlignedView top_view_align(const Scene& scene, const VirtualCamera& cam, const AlignOptions& opt);

/// The fixed central crop of `cam` with no camera motion, prompted at its
/// min-depth pixel.
AlignedView fixed_view(const Scene& scene, const VirtualCamera& cam, const AlignOptions& opt);

/// Most distant pair of edge pixels, ties to the lexicographically smallest
/// pair, returned in row-major order. Throws Errc::kDegenerateEdge for < 2 pixels.
std::pair<Pixel, Pixel> farthest_pixel_pair(std::span<const Pixel> edge);

/// Most distant pair among edge pixels within sqrt(2)/2 of the perpendicular
/// bisector of (a, b). Throws Errc::kDegenerateCross when fewer than two qualify.
std::pair<Pixel, Pixel> perpendicular_pair(std::span<const Pixel> edge, Pixel a, Pixel b);

struct PspResult {
  AlignedView view;
  DepthImage depth;  // clamped and hole-filled crop
  BinaryMask first;  // M_f
  BinaryMask refined;  // M_r
  std::vector<Pixel> cross_prompts;  // empty when CPS is off or degenerate
  bool degenerate_cross = false;
};

/// Alignment (or the fixed view under no_tva) followed by cross-prompted
/// segmentation. Throws Errc::kSegmentationFailure when M_f is empty.
PspResult run_psp(const Scene& scene, const VirtualCamera& cam, const Segmenter& seg,
                  const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace pmsgp
