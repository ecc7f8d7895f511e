#include "specnorm/reconstruction.hpp"

#include "specnorm/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace specnorm {

EllipseFit fit_ellipse(std::span<const Point2> points) {
  const std::size_t n = points.size();
  if (n < 6) throw Error(ErrorCode::InsufficientPoints, "ellipse fitting needs at least 6 points");

  Point2 mean = Point2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(n);
  double sq = 0.0;
  for (const auto& p : points) sq += (p - mean).squaredNorm();
  const double rms = std::sqrt(sq / static_cast<double>(n));
  if (!(rms > 0.0) || !std::isfinite(rms)) {
    throw Error(ErrorCode::DegenerateConfiguration, "points are coincident");
  }
  const double s = std::numbers::sqrt2 / rms;

  Eigen::MatrixX3d quad(n, 3);
  Eigen::MatrixX3d lin(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s * (points[i].x() - mean.x());
    const double y = s * (points[i].y() - mean.y());
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    quad.row(r) << x * x, x * y, y * y;
    lin.row(r) << x, y, 1.0;
  }
  const Mat3 s1 = quad.transpose() * quad;
  const Mat3 s2 = quad.transpose() * lin;
  const Mat3 s3 = lin.transpose() * lin;

  Eigen::SelfAdjointEigenSolver<Mat3> s3_eig(s3);
  const double conditioning = s3_eig.eigenvalues()(0) / s3_eig.eigenvalues()(2);
  if (!(conditioning > 1e-10)) {
    throw Error(ErrorCode::DegenerateConfiguration, "points are collinear");
  }

  const Mat3 t = -s3.ldlt().solve(s2.transpose());
  const Mat3 m = s1 + s2 * t;
  // Premultiply by the inverse of the constraint matrix [[0,0,2],[0,-1,0],[2,0,0]].
  Mat3 reduced;
  reduced.row(0) = m.row(2) / 2;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2;

  Eigen::EigenSolver<Mat3> es(reduced);
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::Vector3d quad_coeffs;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v = es.eigenvectors().col(i).real();
    const double constraint = 4 * v(0) * v(2) - v(1) * v(1);
    const double lambda = std::abs(es.eigenvalues()(i).real());
    if (constraint > 0.0 && lambda < best_value) {
      best = i;
      best_value = lambda;
      quad_coeffs = v;
    }
  }
  if (best < 0) throw Error(ErrorCode::DegenerateConfiguration, "no elliptical solution for these points");

  const Eigen::Vector3d lin_coeffs = t * quad_coeffs;
  Eigen::Matrix<double, 6, 1> coeffs;
  coeffs << quad_coeffs, lin_coeffs;
  coeffs.normalize();

  double residual = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const double r = quad.row(i).dot(coeffs.head<3>()) + lin.row(i).dot(coeffs.tail<3>());
    residual += r * r;
  }

  const Conic normalized = Conic::from_coeffs(coeffs(0), coeffs(1), coeffs(2), coeffs(3), coeffs(4), coeffs(5));
  Mat3 cond;
  cond << s, 0, -s * mean.x(),
          0, s, -s * mean.y(),
          0, 0, 1;
  EllipseFit fit{Conic::from_matrix(cond.transpose() * normalized.matrix() * cond), {}};

  double dist = 0.0;
  for (const auto& p : points) {
    const double d = sampson_distance(fit.conic, p);
    dist += d * d;
  }
  fit.diagnostics.rms_algebraic = std::sqrt(residual / static_cast<double>(n));
  fit.diagnostics.rms_distance = std::sqrt(dist / static_cast<double>(n));
  fit.diagnostics.point_count = n;
  fit.diagnostics.conditioning = conditioning;
  fit.diagnostics.eccentricity = fit.conic.eccentricity();
  return fit;
}

double sampson_distance(const Conic& c, const Point2& p) {
  const Vec3 x(p.x(), p.y(), 1.0);
  const Vec3 g = c.matrix() * x;
  const double grad = 2.0 * g.head<2>().norm();
  const double value = x.dot(g);
  if (grad == 0.0) return std::abs(value) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(value) / grad;
}

Conic normalize_to_camera(const Conic& c, const Intrinsics& k) { return transform_conic(c, k.matrix()); }

namespace {

UnitVec3 facing_camera(const Vec3& v) { return UnitVec3(v.z() < 0.0 ? Vec3(-v) : v); }

}  // namespace

NormalPair backproject_circle(const Conic& cn) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(cn.matrix());
  Eigen::Vector3d lam = es.eigenvalues();  // ascending
  Mat3 vec = es.eigenvectors();
  const int positives = static_cast<int>((lam.array() > 0.0).count());
  const int negatives = static_cast<int>((lam.array() < 0.0).count());
  if (positives == 1 && negatives == 2) {
    lam = -lam;
  } else if (!(positives == 2 && negatives == 1)) {
    throw Error(ErrorCode::NotAnEllipse, "conic does not have signature (+, +, -)");
  }
  // Order as lambda1 >= lambda2 > 0 > lambda3.
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lam(a) > lam(b); });
  const double l1 = lam(order[0]);
  const double l2 = lam(order[1]);
  const double l3 = lam(order[2]);
  const Vec3 e1 = vec.col(order[0]);
  const Vec3 e3 = vec.col(order[2]);

  const double spread = l1 - l3;
  if (!(spread > 1e-12)) throw Error(ErrorCode::NumericallyDegenerate, "conic eigenvalues are not separated");

  NormalPair out;
  out.axis = e1;
  const double gap = (l1 - l2) / spread;
  if (gap < 1e-7) {
    out.n_plus = out.n_minus = facing_camera(e3);
    out.degenerate = true;
    return out;
  }
  const double along_axis = std::sqrt(gap);
  const double along_cone = std::sqrt((l2 - l3) / spread);
  // Orient e3 first so that the sign in front of e1 keeps its meaning.
  const Vec3 cone = e3.z() < 0.0 ? Vec3(-e3) : e3;
  out.n_plus = facing_camera(along_axis * e1 + along_cone * cone);
  out.n_minus = facing_camera(-along_axis * e1 + along_cone * cone);
  return out;
}

double angular_error(const NormalPair& pair, const UnitVec3& truth) {
  const double a = angle_between(pair.n_plus, truth);
  const double b = angle_between(pair.n_minus, truth);
  return std::min(a, b) * 180.0 / std::numbers::pi;
}

double oracle_sign_error(const NormalPair& pair, const UnitVec3& truth) {
  const auto side = [&](const UnitVec3& n) { return n.vec().dot(pair.axis) >= 0.0; };
  const bool truth_side = side(truth);
  const UnitVec3* pick = nullptr;
  if (side(pair.n_plus) != side(pair.n_minus)) {
    pick = side(pair.n_plus) == truth_side ? &pair.n_plus : &pair.n_minus;
  }
  if (!pick) return angular_error(pair, truth);
  return angle_between(*pick, truth) * 180.0 / std::numbers::pi;
}

}  // namespace specnorm
