#include "pmsgp/geometry.hpp"

#include <algorithm>
#include <string>

#include "pmsgp/error.hpp"

namespace pmsgp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidDepth: return "invalid-depth";
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kConfig: return "config";
    case Errc::kUnfillable: return "unfillable";
    case Errc::kEmptyMask: return "empty-mask";
    case Errc::kDimensionMismatch: return "dimension-mismatch";
    case Errc::kInvalidSeed: return "invalid-seed";
    case Errc::kNoValidPixel: return "no-valid-pixel";
    case Errc::kDegenerateEdge: return "degenerate-edge";
    case Errc::kDegenerateCross: return "degenerate-cross";
    case Errc::kSegmentationFailure: return "segmentation-failure";
    case Errc::kNoGrasp: return "no-grasp";
    case Errc::kEmptyScene: return "empty-scene";
    case Errc::kSceneGeneration: return "scene-generation";
    case Errc::kMalformedPose: return "malformed-pose";
    case Errc::kIo: return "io";
    case Errc::kParse: return "parse";
  }
  return "unknown";
}

double normalize_half_turn(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  // fmod of a value just below a multiple of pi can round up to pi itself.
  if (t >= kPi) t = 0.0;
  return t;
}

double half_turn_distance(double a, double b) {
  const double d = std::fabs(normalize_half_turn(a) - normalize_half_turn(b));
  return std::min(d, kPi - d);
}

GraspBox make_grasp_box(double x, double y, double w, double h, double theta) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(theta)) {
    throw Error(Errc::kInvalidArgument, "grasp box fields must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw Error(Errc::kInvalidArgument, "grasp box requires w > 0 and h > 0");
  }
  return GraspBox{x, y, w, h, normalize_half_turn(theta)};
}

bool box_center_in_bounds(const GraspBox& g, int width, int height) {
  return g.x >= -0.5 && g.y >= -0.5 && g.x < width - 0.5 && g.y < height - 0.5;
}

std::array<Point2d, 4> grasp_box_corners(const GraspBox& g) {
  const Point2d c = g.center();
  const Point2d u = g.axis() * (g.w / 2.0);
  const Point2d n = g.finger_axis() * (g.h / 2.0);
  return {c - u - n, c + u - n, c + u + n, c - u + n};
}

bool box_contains(const GraspBox& g, Point2d p) { return box_contains(g, p, g.axis(), g.finger_axis()); }

void validate(const CameraIntrinsics& k) {
  if (!(k.fx > 0.0) || !(k.fy > 0.0) || !std::isfinite(k.cx) || !std::isfinite(k.cy)) {
    throw Error(Errc::kConfig, "camera intrinsics require fx > 0 and fy > 0");
  }
}

CameraPoint pixel_to_camera(Point2d px, double d, const CameraIntrinsics& k) {
  if (!std::isfinite(d) || d <= 0.0) {
    throw Error(Errc::kInvalidDepth, "depth must be finite and positive, got " + std::to_string(d));
  }
  return {(px.x - k.cx) * d / k.fx, (px.y - k.cy) * d / k.fy, d};
}

Point2d camera_to_pixel(const CameraPoint& p, const CameraIntrinsics& k) {
  return {p.x * k.fx / p.z + k.cx, p.y * k.fy / p.z + k.cy};
}

void validate(const HandEyeCalibration& cal) {
  std::array<bool, 3> seen{false, false, false};
  for (const auto& a : cal.axes) {
    if (a.source < 0 || a.source > 2 || (a.sign != 1 && a.sign != -1)) {
      throw Error(Errc::kConfig, "hand-eye axis mapping must use sources 0..2 and signs +-1");
    }
    if (seen[a.source]) throw Error(Errc::kConfig, "hand-eye axis mapping is not a permutation");
    seen[a.source] = true;
  }
  if (!(cal.calibration_error >= 0.0)) {
    throw Error(Errc::kConfig, "hand-eye calibration error must be >= 0");
  }
}

std::array<SignedAxis, 3> axes_from_matrix(const std::array<std::array<double, 3>, 3>& m) {
  std::array<SignedAxis, 3> axes{};
  for (int r = 0; r < 3; ++r) {
    int nonzero = 0;
    for (int c = 0; c < 3; ++c) {
      const double v = m[r][c];
      if (v == 0.0) continue;
      if (v != 1.0 && v != -1.0) {
        throw Error(Errc::kConfig, "hand-eye rotation must be a signed permutation matrix");
      }
      ++nonzero;
      axes[r] = {c, v > 0 ? 1 : -1};
    }
    if (nonzero != 1) {
      throw Error(Errc::kConfig, "hand-eye rotation must be a signed permutation matrix");
    }
  }
  HandEyeCalibration probe;
  probe.axes = axes;
  validate(probe);
  return axes;
}

EndEffectorPoint camera_to_robot(const CameraPoint& p, const HandEyeCalibration& cal) {
  const std::array<double, 3> in{p.x, p.y, p.z};
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = cal.axes[i].sign * in[cal.axes[i].source] + cal.translation[i];
  }
  return {out[0], out[1], out[2]};
}

CameraPoint robot_to_camera(const EndEffectorPoint& p, const HandEyeCalibration& cal) {
  const std::array<double, 3> in{p.x, p.y, p.z};
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[cal.axes[i].source] = cal.axes[i].sign * (in[i] - cal.translation[i]);
  }
  return {out[0], out[1], out[2]};
}

void validate(const GraspProjection& proj) {
  if (!(proj.width_scale > 0.0)) throw Error(Errc::kConfig, "projection width scale must be > 0");
  if (!(proj.angle_scale != 0.0)) throw Error(Errc::kConfig, "projection angle scale must be non-zero");
  if (!(proj.max_opening > 0.0)) throw Error(Errc::kConfig, "gripper max opening must be > 0");
}

ProjectedGrasp project_grasp_params(double w_px, double theta, const GraspProjection& proj,
                                    double depth, const CameraIntrinsics& k) {
  if (!(w_px > 0.0)) throw Error(Errc::kInvalidArgument, "grasp width must be positive");
  if (!std::isfinite(depth) || depth <= 0.0) {
    throw Error(Errc::kInvalidDepth, "projection depth must be finite and positive");
  }
  const double metric = w_px * depth / k.fx;
  const double w = std::clamp(proj.width_scale * metric + proj.width_offset, 0.0, proj.max_opening);
  return {w, proj.angle_scale * theta + proj.angle_offset};
}

ProjectedGrasp unproject_grasp_params(const ProjectedGrasp& robot, const GraspProjection& proj) {
  return {(robot.width - proj.width_offset) / proj.width_scale,
          (robot.theta - proj.angle_offset) / proj.angle_scale};
}

}  // namespace pmsgp
