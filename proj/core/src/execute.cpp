#include <algorithm>
#include <cmath>

#include "pmsgp/scene.hpp"

namespace pmsgp {
namespace {

struct Chord {
  double t_min = 0.0;
  double t_max = 0.0;
  // |cos| of the angle between the closing axis and the surface normal at each end.
  double cos_min = 1.0;
  double cos_max = 1.0;
};

// Intersection of the line c + t * a with the object's footprint. The caller
// guarantees c lies inside the footprint.
Chord footprint_chord(const SceneObject& o, Point2d c, Point2d a) {
  if (o.shape == Shape::kBox) {
    const double cy = std::cos(o.yaw);
    const double sy = std::sin(o.yaw);
    const double ex = c.x - o.x;
    const double ey = c.y - o.y;
    const double pos[2] = {cy * ex + sy * ey, -sy * ex + cy * ey};
    const double dir[2] = {cy * a.x + sy * a.y, -sy * a.x + cy * a.y};
    const double half[2] = {0.5 * o.dims[0], 0.5 * o.dims[1]};
    Chord ch{-1e9, 1e9, 1.0, 1.0};
    for (int k = 0; k < 2; ++k) {
      if (std::fabs(dir[k]) < 1e-15) continue;
      double t1 = (-half[k] - pos[k]) / dir[k];
      double t2 = (half[k] - pos[k]) / dir[k];
      if (t1 > t2) std::swap(t1, t2);
      if (t1 > ch.t_min) {
        ch.t_min = t1;
        ch.cos_min = std::fabs(dir[k]);
      }
      if (t2 < ch.t_max) {
        ch.t_max = t2;
        ch.cos_max = std::fabs(dir[k]);
      }
    }
    return ch;
  }
  const double r = 0.5 * o.dims[0];
  const Point2d e{c.x - o.x, c.y - o.y};
  const double b = e.dot(a);
  const double disc = std::max(0.0, b * b - e.dot(e) + r * r);
  const double sq = std::sqrt(disc);
  // At either end the radial normal makes |cos| = sqrt(disc) / r with the axis.
  const double cosv = std::min(1.0, sq / r);
  return {-b - sq, -b + sq, cosv, cosv};
}

}  // namespace

WorldGrasp robot_to_world(const RobotGrasp& g, const VirtualCamera& cam, const HandEyeCalibration& cal,
                          const GraspProjection& proj, double ground_height, double finger_length) {
  const CameraPoint cp = robot_to_camera({g.x, g.y, g.z}, cal);
  const WorldPoint wp = camera_to_world(cp, cam, ground_height);
  const ProjectedGrasp image = unproject_grasp_params({g.width, g.theta}, proj);
  return {wp.x, wp.y, wp.z, image.theta + cam.view_rotation, image.width, finger_length};
}

ExecutionResult execute_grasp(const Scene& s, const WorldGrasp& g, std::optional<int> target_hint,
                              const GripperModel& gripper, double margin) {
  (void)target_hint;  // the grasped object is decided by the center ray alone
  const bool finite = std::isfinite(g.x) && std::isfinite(g.y) && std::isfinite(g.z) &&
                      std::isfinite(g.yaw) && std::isfinite(g.width) && std::isfinite(g.finger_length);
  if (!finite || !(g.width > 0.0) || !(g.finger_length > 0.0)) {
    throw Error(Errc::kMalformedPose, "grasp pose has non-finite or non-positive fields");
  }
  const auto& ws = s.workspace;
  if (g.x < ws.x_min - margin || g.x > ws.x_max + margin || g.y < ws.y_min - margin ||
      g.y > ws.y_max + margin) {
    throw Error(Errc::kMalformedPose, "grasp center lies outside the workspace");
  }

  auto fail = [&](FailureReason r) { return ExecutionResult{GraspOutcome{false, r, std::nullopt}, s}; };

  // Rule 1: the center ray must land on an object.
  const SceneObject* target = nullptr;
  double best = s.ground_height;
  for (const auto& o : s.objects) {
    if (auto h = surface_height(o, g.x, g.y); h && *h > best) {
      best = *h;
      target = &o;
    }
  }
  if (target == nullptr) return fail(FailureReason::kMissedTarget);

  // Rule 2: the chord along the closing axis fits between the fingers.
  const Point2d center{g.x, g.y};
  const Point2d axis{std::cos(g.yaw), std::sin(g.yaw)};
  const Chord chord = footprint_chord(*target, center, axis);
  const double half = 0.5 * g.width;
  if (g.width > gripper.max_opening + 1e-12 || chord.t_min < -half || chord.t_max > half) {
    return fail(FailureReason::kWidthExceeded);
  }

  // Rule 3: finger sweeps.
  const Point2d finger_dir{-axis.y, axis.x};
  const double tip = g.z - gripper.insertion;
  const int samples = static_cast<int>(std::ceil(g.finger_length / 0.0005)) + 1;
  for (double side : {-1.0, 1.0}) {
    const Point2d finger_center = center + axis * (side * half);
    for (int k = 0; k < samples; ++k) {
      const double tau = -0.5 * g.finger_length + g.finger_length * k / (samples - 1);
      const Point2d p = finger_center + finger_dir * tau;
      for (const auto& o : s.objects) {
        const auto h = surface_height(o, p.x, p.y);
        if (!h) continue;
        const bool blocked = (&o == target) ? *h > tip : *h > g.z + gripper.clearance;
        if (blocked) return fail(FailureReason::kCollisionAdjacent);
      }
    }
  }
  if (s.ground_height > tip) return fail(FailureReason::kCollisionGround);

  // Rule 4: both contacts inside the friction cone.
  const double cone = std::cos(gripper.friction_angle);
  if (chord.cos_min < cone || chord.cos_max < cone) {
    return fail(FailureReason::kAntipodalFail);
  }

  const int id = target->id;
  return {GraspOutcome{true, std::nullopt, id}, remove_and_resettle(s, id)};
}

}  // namespace pmsgp
