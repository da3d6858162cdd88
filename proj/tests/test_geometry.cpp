#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pmsgp/error.hpp"
#include "pmsgp/geometry.hpp"
#include "pmsgp/rng.hpp"

using namespace pmsgp;

namespace {

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::kParse;
}

void expect_point(Point2d p, double x, double y, double tol = 1e-12) {
  EXPECT_NEAR(p.x, x, tol);
  EXPECT_NEAR(p.y, y, tol);
}

}  // namespace

TEST(PixelToCamera, OriginWithUnitIntrinsics) {
  const CameraPoint p = pixel_to_camera({0, 0}, 1.0, {1, 1, 0, 0});
  EXPECT_EQ(p, (CameraPoint{0, 0, 1}));
}

TEST(PixelToCamera, PrincipalPointMapsToOpticalAxis) {
  for (double f : {1.0, 615.0, 1234.5}) {
    const CameraIntrinsics k{f, f * 0.9, 321.5, 200.25};
    const CameraPoint p = pixel_to_camera({k.cx, k.cy}, 0.5, k);
    EXPECT_EQ(p.x, 0.0);
    EXPECT_EQ(p.y, 0.0);
    EXPECT_EQ(p.z, 0.5);
  }
}

TEST(PixelToCamera, OffsetPixelMatchesHandComputation) {
  // (763, 319) is (+123, -41) from the principal point: 123 * 0.4 / 615 = 0.08, -41 * 0.4 / 615 = -0.02666...
  const CameraPoint p = pixel_to_camera({763, 319}, 0.40, {615, 615, 640, 360});
  EXPECT_NEAR(p.x, 0.08, 1e-12);
  EXPECT_NEAR(p.y, -0.4 / 15.0, 1e-12);
  EXPECT_EQ(p.z, 0.40);
}

TEST(PixelToCamera, RejectsBadDepth) {
  const CameraIntrinsics k;
  for (double d : {0.0, -0.1, std::numeric_limits<double>::infinity(), std::nan("")}) {
    EXPECT_EQ(error_of([&] { pixel_to_camera({1, 1}, d, k); }), Errc::kInvalidDepth) << d;
  }
}

TEST(PixelToCamera, ForwardProjectionRecoversPixel) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const CameraIntrinsics k{rng.uniform(100, 2000), rng.uniform(100, 2000), rng.uniform(0, 1280),
                             rng.uniform(0, 720)};
    const Point2d px{rng.uniform(-50, 1330), rng.uniform(-50, 770)};
    const double d = std::exp(rng.uniform(-8, 4));
    const Point2d back = camera_to_pixel(pixel_to_camera(px, d, k), k);
    EXPECT_NEAR(back.x, px.x, 1e-6);
    EXPECT_NEAR(back.y, px.y, 1e-6);
  }
}

TEST(CameraToRobot, IdentityCalibration) {
  HandEyeCalibration cal;
  const EndEffectorPoint p = camera_to_robot({0.1, 0.2, 0.3}, cal);
  EXPECT_EQ(p, (EndEffectorPoint{0.1, 0.2, 0.3}));
}

TEST(CameraToRobot, SignedAxisSwap) {
  // X -> -Y and Y -> -X: the robot's x is minus the camera's y and vice versa.
  HandEyeCalibration cal;
  cal.axes = axes_from_matrix({{{0, -1, 0}, {-1, 0, 0}, {0, 0, 1}}});
  EXPECT_EQ(cal.axes[0], (SignedAxis{1, -1}));
  EXPECT_EQ(cal.axes[1], (SignedAxis{0, -1}));
  EXPECT_EQ(cal.axes[2], (SignedAxis{2, 1}));
  const EndEffectorPoint p = camera_to_robot({1, 2, 3}, cal);
  EXPECT_EQ(p, (EndEffectorPoint{-2, -1, 3}));
  EXPECT_EQ(robot_to_camera(p, cal), (CameraPoint{1, 2, 3}));
}

TEST(CameraToRobot, RoundTripIsExactForRationalFriendlyInputs) {
  HandEyeCalibration cal;
  cal.axes = {{{2, -1}, {0, 1}, {1, -1}}};
  cal.translation = {0.25, -0.5, 0.125};
  for (int i = -8; i <= 8; ++i) {
    const CameraPoint p{i * 0.25, i * -0.125, 0.5 + i * 0.0625};
    EXPECT_EQ(robot_to_camera(camera_to_robot(p, cal), cal), p);
  }
}

TEST(CameraToRobot, RoundTripWithinTolerance) {
  Rng rng(5);
  HandEyeCalibration cal;
  cal.axes = {{{1, 1}, {2, -1}, {0, -1}}};
  cal.translation = {0.0123, -0.456, 0.0789};
  for (int i = 0; i < 1000; ++i) {
    const CameraPoint p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 2)};
    const CameraPoint q = robot_to_camera(camera_to_robot(p, cal), cal);
    EXPECT_NEAR(q.x, p.x, 1e-12);
    EXPECT_NEAR(q.y, p.y, 1e-12);
    EXPECT_NEAR(q.z, p.z, 1e-12);
  }
}

TEST(CameraToRobot, RejectsNonPermutation) {
  EXPECT_EQ(error_of([] { axes_from_matrix({{{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}}); }), Errc::kConfig);
  EXPECT_EQ(error_of([] { axes_from_matrix({{{0.5, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }), Errc::kConfig);
  EXPECT_EQ(error_of([] { axes_from_matrix({{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}}); }), Errc::kConfig);
  HandEyeCalibration bad;
  bad.axes[1].sign = 2;
  EXPECT_EQ(error_of([&] { validate(bad); }), Errc::kConfig);
  bad = {};
  bad.calibration_error = -1;
  EXPECT_EQ(error_of([&] { validate(bad); }), Errc::kConfig);
}

TEST(ProjectGraspParams, PinholeWidth) {
  const ProjectedGrasp r = project_grasp_params(100, 0.0, {1, 0, 1, 0, 0.2}, 0.615, {615, 615, 0, 0});
  EXPECT_NEAR(r.width, 0.1, 1e-15);
  EXPECT_EQ(r.theta, 0.0);
}

TEST(ProjectGraspParams, ClampsToMaxOpening) {
  const GraspProjection proj;
  EXPECT_EQ(project_grasp_params(1e6, 0.3, proj, 0.7, {}).width, proj.max_opening);
  GraspProjection neg;
  neg.width_offset = -1.0;
  EXPECT_EQ(project_grasp_params(10, 0.3, neg, 0.7, {}).width, 0.0);
}

TEST(ProjectGraspParams, AngleIsAffine) {
  const GraspProjection proj{1, 0, -1, 0.5, 0.085};
  EXPECT_DOUBLE_EQ(project_grasp_params(10, 0.25, proj, 0.7, {}).theta, 0.25);
  EXPECT_DOUBLE_EQ(project_grasp_params(10, 1.0, proj, 0.7, {}).theta, -0.5);
}

TEST(ProjectGraspParams, MonotoneInWidth) {
  Rng rng(3);
  const GraspProjection proj{1.3, 0.002, 1, 0, 10.0};
  for (int i = 0; i < 500; ++i) {
    const double d = rng.uniform(0.2, 1.5);
    const double a = rng.uniform(1, 400);
    const double b = a + rng.uniform(0, 50);
    EXPECT_LE(project_grasp_params(a, 0, proj, d, {}).width, project_grasp_params(b, 0, proj, d, {}).width);
  }
}

TEST(ProjectGraspParams, RejectsBadInputs) {
  EXPECT_EQ(error_of([] { project_grasp_params(0, 0, {}, 0.5, {}); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { project_grasp_params(5, 0, {}, 0.0, {}); }), Errc::kInvalidDepth);
}

TEST(ProjectGraspParams, UnprojectInvertsUnclamped) {
  const GraspProjection proj{1.25, 0.003, -1, 0.2, 1.0};
  const CameraIntrinsics k;
  const ProjectedGrasp r = project_grasp_params(40, 0.7, proj, 0.6, k);
  const ProjectedGrasp back = unproject_grasp_params(r, proj);
  EXPECT_NEAR(back.width, 40 * 0.6 / k.fx, 1e-15);
  EXPECT_NEAR(back.theta, 0.7, 1e-15);
}

TEST(GraspBoxCorners, AxisAligned) {
  const auto c = grasp_box_corners(make_grasp_box(0, 0, 2, 1, 0));
  expect_point(c[0], -1, -0.5);
  expect_point(c[1], 1, -0.5);
  expect_point(c[2], 1, 0.5);
  expect_point(c[3], -1, 0.5);
}

TEST(GraspBoxCorners, QuarterTurnSwapsAxes) {
  // At 90 degrees the opening axis points up the screen (decreasing row).
  const auto c = grasp_box_corners(make_grasp_box(0, 0, 2, 1, kPi / 2));
  expect_point(c[0], -0.5, 1);
  expect_point(c[1], -0.5, -1);
  expect_point(c[2], 0.5, -1);
  expect_point(c[3], 0.5, 1);
}

TEST(GraspBoxCorners, DegenerateDiagonalSegment) {
  // Rotation matrix by hand: local (+-1, 0) -> (+-cos 45, -+sin 45).
  const GraspBox g{0, 0, 2, 0, kPi / 4};
  const auto c = grasp_box_corners(g);
  const double r = std::sqrt(2.0) / 2.0;
  expect_point(c[0], -r, r);
  expect_point(c[1], r, -r);
  expect_point(c[2], r, -r);
  expect_point(c[3], -r, r);
}

TEST(GraspBoxCorners, GeometryProperties) {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const GraspBox g = make_grasp_box(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0.1, 80),
                                      rng.uniform(0.1, 30), rng.uniform(-10, 10));
    const auto c = grasp_box_corners(g);
    const Point2d centroid = (c[0] + c[1] + c[2] + c[3]) * 0.25;
    EXPECT_NEAR(centroid.x, g.x, 1e-9);
    EXPECT_NEAR(centroid.y, g.y, 1e-9);
    EXPECT_NEAR((c[1] - c[0]).norm(), g.w, 1e-9);
    EXPECT_NEAR((c[2] - c[3]).norm(), g.w, 1e-9);
    EXPECT_NEAR((c[2] - c[1]).norm(), g.h, 1e-9);
    EXPECT_NEAR((c[3] - c[0]).norm(), g.h, 1e-9);
    // Opposite sides parallel: zero cross product.
    auto cross = [](Point2d a, Point2d b) { return a.x * b.y - a.y * b.x; };
    EXPECT_NEAR(cross(c[1] - c[0], c[2] - c[3]), 0.0, 1e-9 * g.w * g.w);
    EXPECT_NEAR(cross(c[2] - c[1], c[3] - c[0]), 0.0, 1e-9 * g.h * g.h);
    // A half turn relabels the corners TL <-> BR and TR <-> BL.
    GraspBox flipped = g;
    flipped.theta += kPi;
    const auto f = grasp_box_corners(flipped);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(f[k].x, c[(k + 2) % 4].x, 1e-9);
      EXPECT_NEAR(f[k].y, c[(k + 2) % 4].y, 1e-9);
    }
  }
}

TEST(GraspBox, ValidationAndNormalization) {
  EXPECT_EQ(error_of([] { make_grasp_box(0, 0, 0, 1, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { make_grasp_box(0, 0, 1, -1, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { make_grasp_box(std::nan(""), 0, 1, 1, 0); }), Errc::kInvalidArgument);
  EXPECT_NEAR(make_grasp_box(0, 0, 1, 1, -kPi / 4).theta, 3 * kPi / 4, 1e-15);
  EXPECT_NEAR(make_grasp_box(0, 0, 1, 1, 7 * kPi / 3).theta, kPi / 3, 1e-12);
  EXPECT_EQ(make_grasp_box(0, 0, 1, 1, kPi).theta, 0.0);
}

TEST(GraspBox, ContainsIsClosed) {
  const GraspBox g = make_grasp_box(10, 10, 4, 2, 0);
  EXPECT_TRUE(box_contains(g, {12, 11}));
  EXPECT_TRUE(box_contains(g, {8, 9}));
  EXPECT_FALSE(box_contains(g, {12.01, 10}));
  EXPECT_FALSE(box_contains(g, {10, 11.01}));
}

TEST(Angles, HalfTurnHelpers) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(-50, 50);
    const double n = normalize_half_turn(t);
    EXPECT_GE(n, 0.0);
    EXPECT_LT(n, kPi);
    EXPECT_NEAR(std::sin(2 * n), std::sin(2 * t), 1e-9);
    EXPECT_NEAR(std::cos(2 * n), std::cos(2 * t), 1e-9);
  }
  EXPECT_NEAR(half_turn_distance(deg_to_rad(1), deg_to_rad(179)), deg_to_rad(2), 1e-12);
  EXPECT_NEAR(half_turn_distance(0.3, 0.3 + kPi), 0.0, 1e-12);
}

TEST(Rounding, MatchesLround) {
  Rng rng(99);
  for (int i = 0; i < 200000; ++i) {
    const double v = rng.uniform(-5000, 5000);
    EXPECT_EQ(round_half_away(v), std::lround(v));
    const double h = std::floor(v) + 0.5;
    EXPECT_EQ(round_half_away(h), std::lround(h));
  }
}

TEST(Pixel, RowMajorOrdering) {
  EXPECT_LT((Pixel{5, 1}), (Pixel{0, 2}));
  EXPECT_LT((Pixel{1, 2}), (Pixel{2, 2}));
}

TEST(ErrorCodes, HaveStableNames) {
  EXPECT_EQ(to_string(Errc::kNoGrasp), "no-grasp");
  EXPECT_EQ(to_string(Errc::kDegenerateCross), "degenerate-cross");
  EXPECT_EQ(to_string(Errc::kInvalidDepth), "invalid-depth");
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
  }
  EXPECT_EQ(derive_seed({1, 2}), derive_seed({1, 2}));
  EXPECT_NE(derive_seed({1, 2}), derive_seed({2, 1}));
}
