#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <numbers>

namespace pmsgp {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into [0, pi). A parallel-jaw grasp is symmetric under a half turn.
double normalize_half_turn(double theta);

// Smallest absolute difference between two [0, pi) grasp angles.
double half_turn_distance(double a, double b);

// Integer image coordinate: x is the column, y the row. Ordering is row-major
// (row first, then column); every lexicographic tie-break in the library uses it.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend std::strong_ordering operator<=>(const Pixel& a, const Pixel& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct Point2d {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2d&, const Point2d&) = default;
  Point2d operator+(const Point2d& o) const { return {x + o.x, y + o.y}; }
  Point2d operator-(const Point2d& o) const { return {x - o.x, y - o.y}; }
  Point2d operator*(double s) const { return {x * s, y * s}; }
  double dot(const Point2d& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

// Half away from zero, same as std::lround, without the libm call.
inline int round_half_away(double v) {
  const auto i = static_cast<long>(v);
  const double frac = v - static_cast<double>(i);
  return static_cast<int>(i + static_cast<long>(frac >= 0.5) - static_cast<long>(frac <= -0.5));
}

inline Pixel round_pixel(Point2d p) { return {round_half_away(p.x), round_half_away(p.y)}; }
inline Point2d to_point(Pixel p) { return {static_cast<double>(p.x), static_cast<double>(p.y)}; }

/// Rotated-rectangle grasp in image coordinates.
///
/// `w` runs along the gripper opening axis, `h` along the finger. `theta` is
/// measured counter-clockwise from the image horizontal as seen on screen, so
/// the opening axis in (column, row) coordinates is (cos theta, -sin theta).
struct GraspBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
  double theta = 0.0;

  friend bool operator==(const GraspBox&, const GraspBox&) = default;

  Point2d center() const { return {x, y}; }
  // Unit vector along the opening axis.
  Point2d axis() const { return {std::cos(theta), -std::sin(theta)}; }
  // Unit vector along the fingers.
  Point2d finger_axis() const { return {std::sin(theta), std::cos(theta)}; }
};

// Validates w, h > 0 and finite fields, normalizes theta. Throws Errc::kInvalidArgument.
GraspBox make_grasp_box(double x, double y, double w, double h, double theta);

bool box_center_in_bounds(const GraspBox& g, int width, int height);

// Corners ordered TL, TR, BR, BL (names refer to theta = 0). TL->TR and BR->BL
// are the long sides (length w); TR->BR and BL->TL are the short sides (length h).
std::array<Point2d, 4> grasp_box_corners(const GraspBox& g);

// True when p lies inside the closed rotated rectangle.
bool box_contains(const GraspBox& g, Point2d p);

// Same test with the box's axis() and finger_axis() supplied by the caller.
inline bool box_contains(const GraspBox& g, Point2d p, Point2d axis, Point2d finger) {
  const Point2d d = p - g.center();
  constexpr double kEps = 1e-9;
  return std::fabs(d.dot(axis)) <= g.w / 2.0 + kEps && std::fabs(d.dot(finger)) <= g.h / 2.0 + kEps;
}

struct CameraIntrinsics {
  double fx = 615.0;
  double fy = 615.0;
  double cx = 640.0;
  double cy = 360.0;

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

void validate(const CameraIntrinsics& k);

struct CameraPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const CameraPoint&, const CameraPoint&) = default;
};

/// Back-projects a pixel at depth `d` (meters) through the pinhole model.
/// Throws Errc::kInvalidDepth for d <= 0 or non-finite d.
CameraPoint pixel_to_camera(Point2d px, double d, const CameraIntrinsics& k);

/// Forward pinhole projection; inverse of pixel_to_camera.
Point2d camera_to_pixel(const CameraPoint& p, const CameraIntrinsics& k);

// Output axis i takes `sign * input[source]`.
struct SignedAxis {
  int source = 0;
  int sign = 1;

  friend bool operator==(const SignedAxis&, const SignedAxis&) = default;
};

/// Camera to end-effector transform restricted to a signed axis permutation
/// plus translation. `calibration_error` bounds the planar translation error.
struct HandEyeCalibration {
  std::array<SignedAxis, 3> axes{{{0, 1}, {1, 1}, {2, 1}}};
  std::array<double, 3> translation{0.0, 0.0, 0.0};
  double calibration_error = 0.004;

  friend bool operator==(const HandEyeCalibration&, const HandEyeCalibration&) = default;
};

void validate(const HandEyeCalibration& cal);

// Builds the axis mapping from a 3x3 matrix; anything other than a signed
// permutation matrix is rejected with Errc::kConfig.
std::array<SignedAxis, 3> axes_from_matrix(const std::array<std::array<double, 3>, 3>& m);

struct EndEffectorPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const EndEffectorPoint&, const EndEffectorPoint&) = default;
};

EndEffectorPoint camera_to_robot(const CameraPoint& p, const HandEyeCalibration& cal);
CameraPoint robot_to_camera(const EndEffectorPoint& p, const HandEyeCalibration& cal);

/// Affine map from image grasp width/angle to gripper opening/rotation.
struct GraspProjection {
  double width_scale = 1.0;
  double width_offset = 0.0;
  double angle_scale = 1.0;
  double angle_offset = 0.0;
  double max_opening = 0.085;

  friend bool operator==(const GraspProjection&, const GraspProjection&) = default;
};

void validate(const GraspProjection& proj);

struct ProjectedGrasp {
  double width = 0.0;  // meters
  double theta = 0.0;  // radians about Z
};

ProjectedGrasp project_grasp_params(double w_px, double theta, const GraspProjection& proj,
                                    double depth, const CameraIntrinsics& k);

// Inverts the width/angle map for unclamped values. Returns metric width and image angle.
ProjectedGrasp unproject_grasp_params(const ProjectedGrasp& robot, const GraspProjection& proj);

struct RobotGrasp {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double width = 0.0;
  double theta = 0.0;
  double theta_x = kPi;
  double theta_y = 0.0;

  friend bool operator==(const RobotGrasp&, const RobotGrasp&) = default;
};

}  // namespace pmsgp
