#include "specnorm/error.hpp"
#include "specnorm/harness.hpp"
#include "specnorm/reconstruction.hpp"
#include "specnorm/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace specnorm {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<Point2> ellipse_points(const Point2& c, double a, double b, double angle, int count, double phase = 0.0) {
  std::vector<Point2> pts;
  for (int i = 0; i < count; ++i) {
    const double t = phase + 2 * std::numbers::pi * i / count;
    const Point2 local(a * std::cos(t), b * std::sin(t));
    pts.push_back(c + Eigen::Rotation2Dd(angle) * local);
  }
  return pts;
}

struct Pose {
  Vec3 centre;
  Vec3 normal;
};

Pose random_pose(Rng& rng, double max_slant_deg = 80.0) {
  const double slant = rng.uniform(0, max_slant_deg) * kDeg;
  const double azimuth = rng.uniform(0, 2 * std::numbers::pi);
  const Vec3 n(std::sin(slant) * std::cos(azimuth), std::sin(slant) * std::sin(azimuth), std::cos(slant));
  const Vec3 c(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 1.0);
  return {rng.uniform(5, 50) * c, n};
}

TEST(FitEllipse, RecoversExactEllipse) {
  const auto pts = ellipse_points(Point2(120, -40), 30, 12, 0.4, 50);
  const EllipseFit fit = fit_ellipse(pts);
  ASSERT_TRUE(fit.conic.is_ellipse());
  EXPECT_LT((fit.conic.center() - Point2(120, -40)).norm(), 1e-9);
  const auto axes = fit.conic.semi_axes();
  EXPECT_NEAR(axes[0], 30, 1e-9);
  EXPECT_NEAR(axes[1], 12, 1e-9);
  EXPECT_LT(fit.diagnostics.rms_distance, 1e-9);
  EXPECT_EQ(fit.diagnostics.point_count, 50u);
  EXPECT_NEAR(fit.diagnostics.eccentricity, std::sqrt(1 - 144.0 / 900.0), 1e-9);
}

TEST(FitEllipse, CircleHasZeroEccentricity) {
  const EllipseFit fit = fit_ellipse(ellipse_points(Point2(3, 4), 7, 7, 0, 20));
  EXPECT_NEAR(fit.diagnostics.eccentricity, 0.0, 1e-6);
}

TEST(FitEllipse, NoisyPointsResidualBelowTwentiethPixel) {
  Rng rng(21);
  auto pts = ellipse_points(Point2(200, 200), 80, 45, 1.1, 400);
  for (auto& p : pts) p += 0.01 * Point2(rng.normal(), rng.normal());
  const EllipseFit fit = fit_ellipse(pts);
  EXPECT_LT(fit.diagnostics.rms_distance, 0.05);
  // Geometric distance against the true ellipse, by independent search.
  double worst = 0;
  for (const auto& p : pts) worst = std::max(worst, oracle::distance_to_ellipse(p, Point2(200, 200), 80, 45, 1.1));
  EXPECT_LT(worst, 0.06);
}

TEST(FitEllipse, ShortArcStillElliptic) {
  std::vector<Point2> arc;
  for (int i = 0; i < 30; ++i) {
    const double t = -0.6 + 1.2 * i / 29;
    arc.push_back(Point2(50 * std::cos(t), 20 * std::sin(t)));
  }
  const EllipseFit fit = fit_ellipse(arc);
  EXPECT_TRUE(fit.conic.is_ellipse());
  for (const auto& p : arc) EXPECT_LT(sampson_distance(fit.conic, p), 1e-8);
}

TEST(FitEllipse, Errors) {
  std::vector<Point2> five = ellipse_points(Point2(0, 0), 2, 1, 0, 5);
  try {
    fit_ellipse(five);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientPoints);
  }
  std::vector<Point2> same(10, Point2(1, 1));
  try {
    fit_ellipse(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateConfiguration);
  }
  std::vector<Point2> line;
  for (int i = 0; i < 10; ++i) line.push_back(Point2(i, 2 * i + 1));
  try {
    fit_ellipse(line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateConfiguration);
  }
}

TEST(FitEllipse, SimilarityEquivariance) {
  Rng rng(22);
  const auto pts = ellipse_points(Point2(10, 20), 9, 4, 0.3, 40);
  const Conic base = fit_ellipse(pts).conic;
  for (int i = 0; i < 20; ++i) {
    const double s = rng.uniform(0.1, 10), a = rng.uniform(0, 6.28);
    const Point2 t(rng.uniform(-100, 100), rng.uniform(-100, 100));
    std::vector<Point2> moved;
    for (const auto& p : pts) moved.push_back(s * (Eigen::Rotation2Dd(a) * p) + t);
    Mat3 m = Mat3::Identity();
    m.topLeftCorner<2, 2>() = s * Eigen::Rotation2Dd(a).toRotationMatrix();
    m.topRightCorner<2, 1>() = t;
    const Conic expected = transform_conic(base, m.inverse());
    EXPECT_LT(fit_ellipse(moved).conic.distance(expected), 1e-8);
  }
}

TEST(NormalizeToCamera, IdentityIntrinsicsIsNoOp) {
  const Conic c = Conic::from_coeffs(1, 0.2, 2, -3, 1, -4);
  EXPECT_LT(normalize_to_camera(c, Intrinsics(1, 1, 0, 0)).distance(c), 1e-15);
}

TEST(NormalizeToCamera, MapsPixelsToNormalizedPlane) {
  const Intrinsics k(800, 780, 320, 240);
  const auto pixels = ellipse_points(Point2(350, 260), 40, 25, 0.2, 30);
  const Conic c = fit_ellipse(pixels).conic;
  const Conic cn = normalize_to_camera(c, k);
  for (const auto& p : pixels) {
    const Vec3 x = k.inverse_matrix() * Vec3(p.x(), p.y(), 1);
    EXPECT_NEAR(cn.eval_homogeneous(x), 0.0, 1e-10);
  }
}

TEST(Backprojection, UnitCircleAtUnitDepthIsFrontoParallel) {
  // x^2 + y^2 - 1 on the normalized plane: the circle seen head on.
  const NormalPair n = backproject_circle(Conic::from_coeffs(1, 0, 1, 0, 0, -1));
  EXPECT_TRUE(n.degenerate);
  EXPECT_LT((n.n_plus.vec() - Vec3(0, 0, 1)).norm(), 1e-12);
  EXPECT_LT((n.n_minus.vec() - Vec3(0, 0, 1)).norm(), 1e-12);
  // Sign of the conic matrix does not matter.
  const NormalPair flipped = backproject_circle(Conic::from_coeffs(-1, 0, -1, 0, 0, 1));
  EXPECT_TRUE(flipped.degenerate);
}

TEST(Backprojection, ConicScaleIsIrrelevant) {
  const auto pts = oracle::project_circle(Mat3::Identity(), Vec3(0.3, 0.1, 8), Vec3(0.2, -0.5, 0.8), 1.0, 64);
  const Conic c = fit_ellipse(pts).conic;
  const NormalPair a = backproject_circle(c);
  for (double s : {-3.0, 1e-6, 1e6}) {
    const NormalPair b = backproject_circle(Conic::from_matrix(s * c.matrix()));
    EXPECT_LT(angle_between(a.n_plus, b.n_plus), 1e-12);
    EXPECT_LT(angle_between(a.n_minus, b.n_minus), 1e-12);
  }
}

TEST(Backprojection, RejectsNonEllipses) {
  // Imaginary ellipse and a line pair. A real hyperbola is still a valid
  // cone (a circle crossing the principal plane) and is accepted.
  for (const Conic& c : {Conic::from_coeffs(1, 0, 1, 0, 0, 1), Conic::from_coeffs(1, 0, -1, 0, 0, 0)}) {
    try {
      backproject_circle(c);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotAnEllipse);
    }
  }
}

TEST(Backprojection, ForwardProjectionRoundTrip) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Pose pose = random_pose(rng);
    const double radius = rng.uniform(0.5, 3.0);
    const auto pts = oracle::project_circle(Mat3::Identity(), pose.centre, pose.normal, radius, 64);
    const NormalPair n = backproject_circle(fit_ellipse(pts).conic);
    EXPECT_LT(angular_error(n, UnitVec3(pose.normal)) * kDeg, 1e-6) << "pose " << i;
    EXPECT_GT(n.n_plus.z(), 0.0);
    EXPECT_GT(n.n_minus.z(), 0.0);
  }
}

TEST(Backprojection, RadiusAndDepthInvariance) {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const Pose pose = random_pose(rng, 70);
    const auto pts = oracle::project_circle(Mat3::Identity(), pose.centre, pose.normal, 1.0, 64);
    const auto big = oracle::project_circle(Mat3::Identity(), 10 * pose.centre, pose.normal, 10.0, 64);
    const NormalPair a = backproject_circle(fit_ellipse(pts).conic);
    const NormalPair b = backproject_circle(fit_ellipse(big).conic);
    EXPECT_LT(angle_between(a.n_plus, b.n_plus), 1e-9);
    EXPECT_LT(angle_between(a.n_minus, b.n_minus), 1e-9);
  }
}

TEST(Backprojection, RotationAboutOpticalAxisRotatesNormals) {
  const Pose pose{Vec3(0.5, -0.2, 10), Vec3(std::sin(0.6), 0, std::cos(0.6))};
  const auto pts = oracle::project_circle(Mat3::Identity(), pose.centre, pose.normal, 1.0, 64);
  const NormalPair a = backproject_circle(fit_ellipse(pts).conic);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(0.9, Vec3::UnitZ()).toRotationMatrix();
  const auto rpts = oracle::project_circle(Mat3::Identity(), r * pose.centre, r * pose.normal, 1.0, 64);
  const NormalPair b = backproject_circle(fit_ellipse(rpts).conic);
  const UnitVec3 ra(r * a.n_plus.vec()), rb(r * a.n_minus.vec());
  EXPECT_LT(std::min(angle_between(ra, b.n_plus), angle_between(ra, b.n_minus)), 1e-9);
  EXPECT_LT(std::min(angle_between(rb, b.n_plus), angle_between(rb, b.n_minus)), 1e-9);
}

TEST(Backprojection, PixelIntrinsicsEndToEnd) {
  const Intrinsics k(406, 406, 203, 203);
  const Vec3 n(0, -std::sin(58 * kDeg), std::cos(58 * kDeg));
  const auto pts = oracle::project_circle(k.matrix(), Vec3(0, 0, 400), n, 100, 200);
  const NormalPair pair = backproject_circle(normalize_to_camera(fit_ellipse(pts).conic, k));
  EXPECT_LT(angular_error(pair, UnitVec3(n)), 1e-7);
  EXPECT_LT(oracle_sign_error(pair, UnitVec3(n)), 1e-7);
}

TEST(AngularError, Examples) {
  NormalPair pair;
  pair.n_plus = UnitVec3(Vec3(0, 0, 1));
  pair.n_minus = UnitVec3(Vec3(1, 0, 1));
  EXPECT_NEAR(angular_error(pair, UnitVec3(Vec3(1, 0, 1))), 0.0, 1e-12);
  EXPECT_NEAR(angular_error(pair, UnitVec3(Vec3(0, 1, 1))), 45.0, 1e-12);
  EXPECT_NEAR(angular_error(pair, UnitVec3(Vec3(-1, 0, 1))), 45.0, 1e-12);
  pair.axis = Vec3(1, 0, 0);
  // Both candidates sit on the same side of the axis: falls back to the minimum.
  EXPECT_NEAR(oracle_sign_error(pair, UnitVec3(Vec3(-1, 0, 1))), 45.0, 1e-12);
}

TEST(Pipeline, NoiselessSlantedViewBelowTenthDegree) {
  SimParams p;
  p.noise = 0;
  const TrialRecord r = run_trial(p, 1);
  ASSERT_TRUE(r.success) << r.reason;
  EXPECT_LT(r.error_deg, 0.1);
}

}  // namespace
}  // namespace specnorm
