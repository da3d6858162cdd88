#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmsgp/geometry.hpp"
#include "pmsgp/imaging.hpp"

namespace pmsgp {

enum class Shape { kBox, kCylinder, kSphere };

std::string_view to_string(Shape s);
Shape shape_from_string(std::string_view s);

/// One rigid primitive in the pile. `dims` are the axis-aligned extents in
/// the object frame: box (length x, width y, height), cylinder (diameter,
/// diameter, height), sphere (diameter, diameter, diameter). `z` is the
/// height of the object's base above the world origin.
struct SceneObject {
  int id = 0;
  Shape shape = Shape::kBox;
  std::array<double, 3> dims{0.05, 0.05, 0.03};
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double z = 0.0;
  std::string material = "generic";

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

double top_height(const SceneObject& o);
// Radius of the smallest vertical cylinder around the object's axis that contains it.
double footprint_radius(const SceneObject& o);
bool footprint_contains(const SceneObject& o, double x, double y);
// Top surface height at (x, y) seen straight from above, if the footprint covers it.
std::optional<double> surface_height(const SceneObject& o, double x, double y);

struct Workspace {
  double x_min = -0.2;
  double x_max = 0.2;
  double y_min = -0.2;
  double y_max = 0.2;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

struct Scene {
  std::uint64_t seed = 0;
  double ground_height = 0.0;
  Workspace workspace;
  std::vector<SceneObject> objects;

  friend bool operator==(const Scene&, const Scene&) = default;

  bool empty() const noexcept { return objects.empty(); }
  const SceneObject* find(int id) const;
};

struct ShapeMix {
  double box = 0.6;
  double cylinder = 0.25;
  double sphere = 0.15;

  friend bool operator==(const ShapeMix&, const ShapeMix&) = default;
};

struct SceneParams {
  Workspace workspace;
  double ground_height = 0.0;
  // Box side lengths and heights, cylinder diameters and heights, sphere diameters.
  std::array<double, 2> box_side{0.03, 0.08};
  std::array<double, 2> box_height{0.02, 0.04};
  std::array<double, 2> cylinder_diameter{0.03, 0.07};
  std::array<double, 2> cylinder_height{0.02, 0.05};
  std::array<double, 2> sphere_diameter{0.03, 0.05};
  double min_support_fraction = 0.25;
  int max_retries = 200;
  // Spacing of the footprint samples used for support computation.
  double support_grid = 0.002;

  friend bool operator==(const SceneParams&, const SceneParams&) = default;
};

struct SupportInfo {
  double height = 0.0;  // resting base height
  int support_id = 0;   // 0 = ground
  double coverage = 1.0;
};

/// Where an object with the given footprint comes to rest on `below`: the
/// highest top among earlier objects under any footprint sample, and the
/// fraction of samples covered by the object providing that top.
SupportInfo compute_support(std::span<const SceneObject> below, const SceneObject& o,
                            double ground_height, double grid);

/// Sequential drop-and-settle pile. Deterministic for (seed, n, mix, params).
/// Throws Errc::kSceneGeneration when an object cannot be placed with enough
/// support after params.max_retries attempts, Errc::kInvalidArgument for n < 1.
Scene generate_scene(std::uint64_t seed, int n, const ShapeMix& mix, const SceneParams& params = {});

/// Removes the object and lets every later object drop straight down onto its new support.
Scene remove_and_resettle(const Scene& scene, int id, double grid = 0.002);

/// Movable top-down pinhole camera. `height` is measured from the ground.
/// `view_rotation` turns the image clockwise on screen about the optical axis.
struct VirtualCamera {
  double x = 0.0;
  double y = 0.0;
  double height = 0.8;
  CameraIntrinsics intrinsics{615.0, 615.0, 640.0, 360.0};
  int full_width = 1280;
  int full_height = 720;
  int crop_width = 224;
  int crop_height = 224;
  double view_rotation = 0.0;

  friend bool operator==(const VirtualCamera&, const VirtualCamera&) = default;

  // Top-left of the centered crop in full-view pixels.
  Pixel crop_origin() const;
  CameraIntrinsics crop_intrinsics() const;
  CameraIntrinsics view_intrinsics(bool crop) const { return crop ? crop_intrinsics() : intrinsics; }
  int view_width(bool crop) const { return crop ? crop_width : full_width; }
  int view_height(bool crop) const { return crop ? crop_height : full_height; }
};

void validate(const VirtualCamera& cam);

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

WorldPoint camera_to_world(const CameraPoint& p, const VirtualCamera& cam, double ground_height);
CameraPoint world_to_camera(const WorldPoint& p, const VirtualCamera& cam, double ground_height);
// Planar world offset produced by a camera-frame (x, y) displacement.
Point2d camera_offset_to_world(double dx, double dy, double view_rotation);

struct RenderedView {
  DepthImage depth;
  LabelImage labels;
};

/// Casts one ray per pixel and keeps the nearest hit. Depth is the camera-frame z
/// of the hit; pixels that miss every object see the ground plane.
RenderedView render_view(const Scene& s, const VirtualCamera& cam, bool crop);
DepthImage render_depth(const Scene& s, const VirtualCamera& cam, bool crop);
LabelImage render_labels(const Scene& s, const VirtualCamera& cam, bool crop);

/// Adds zero-mean Gaussian noise to valid pixels; results stay positive.
DepthImage add_depth_noise(const DepthImage& img, double sigma, std::uint64_t seed);

/// Ground-truth segmentation: every pixel carrying the majority id among the
/// prompts (ties go to the first prompt's id). Ground prompts give an empty mask.
BinaryMask oracle_segment(const LabelImage& labels, std::span<const Pixel> prompts);

/// Oracle mask with a seeded bite taken out of the boundary region farthest
/// from the prompt centroid. One to three prompts remove `corruption` of the
/// area; four or more spread prompts remove `0.2 * corruption`.
BinaryMask noisy_segment(const LabelImage& labels, std::span<const Pixel> prompts,
                         std::uint64_t seed, double corruption);

/// Object under the minimum-depth pixel of the full view. Throws Errc::kEmptyScene.
int topmost_object(const Scene& s, const VirtualCamera& cam);

enum class FailureReason { kCollisionAdjacent, kCollisionGround, kMissedTarget, kWidthExceeded, kAntipodalFail };

std::string_view to_string(FailureReason r);
FailureReason failure_reason_from_string(std::string_view s);

struct GraspOutcome {
  bool success = false;
  std::optional<FailureReason> reason;
  std::optional<int> object_id;

  friend bool operator==(const GraspOutcome&, const GraspOutcome&) = default;
};

struct GripperModel {
  double max_opening = 0.085;
  double insertion = 0.015;
  double clearance = 0.005;
  double friction_angle = 0.2;

  friend bool operator==(const GripperModel&, const GripperModel&) = default;
};

/// Top-down grasp in world coordinates. `z` is the commanded grasp height
/// (the surface height the planner measured at the grasp center).
struct WorldGrasp {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  double width = 0.0;
  double finger_length = 0.015;
};

WorldGrasp robot_to_world(const RobotGrasp& g, const VirtualCamera& cam, const HandEyeCalibration& cal,
                          const GraspProjection& proj, double ground_height, double finger_length);

struct ExecutionResult {
  GraspOutcome outcome;
  Scene scene;
};

/// Deterministic grasp success model. Rules, checked in this order:
///  1. the vertical ray at the grasp center hits an object (the grasped one);
///  2. that object's chord along the closing axis lies between the fingers
///     and fits the gripper;
///  3. neither finger segment, lowered to z - insertion, meets the grasped
///     object, an object higher than z + clearance, or the ground;
///  4. the surface normals at both chord ends lie inside the friction cone
///     around the closing axis.
/// On success the object is removed and the pile resettles.
/// Throws Errc::kMalformedPose for non-finite fields, non-positive width or
/// finger length, or a center outside the workspace grown by `margin`.
ExecutionResult execute_grasp(const Scene& s, const WorldGrasp& g, std::optional<int> target_hint,
                              const GripperModel& gripper, double margin = 0.15);

}  // namespace pmsgp
