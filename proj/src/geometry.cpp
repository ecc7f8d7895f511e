#include "specnorm/geometry.hpp"

#include "specnorm/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace specnorm {

UnitVec3::UnitVec3(const Vec3& v) {
  const double len = v.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw Error(ErrorCode::DegenerateGeometry, "cannot normalize a zero or non-finite vector");
  }
  v_ = v / len;
}

double angle_between(const UnitVec3& a, const UnitVec3& b) {
  return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

namespace {

Mat3 canonicalize(const Mat3& raw) {
  Mat3 m = 0.5 * (raw + raw.transpose());
  const double norm = m.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidConic, "conic matrix is zero or non-finite");
  }
  m /= norm;
  int pivot = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(m(i, i)) > std::abs(m(pivot, pivot))) pivot = i;
  }
  if (m(pivot, pivot) < 0.0) m = -m;
  return m;
}

}  // namespace

Conic::Conic(const Mat3& canonical) : m_(canonical) {
  const double a = m_(0, 0);
  const double b = 2.0 * m_(0, 1);
  const double c = m_(1, 1);
  kind_ = (b * b - 4.0 * a * c < 0.0) ? ConicKind::Ellipse : ConicKind::Other;
}

Conic::Conic() : Conic(canonicalize(Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal().toDenseMatrix())) {}

Conic Conic::from_coeffs(double a, double b, double c, double d, double e, double f) {
  Mat3 m;
  m << a, b / 2, d / 2,
       b / 2, c, e / 2,
       d / 2, e / 2, f;
  return Conic(canonicalize(m));
}

Conic Conic::from_matrix(const Mat3& m) { return Conic(canonicalize(m)); }

std::array<double, 6> Conic::coeffs() const {
  return {m_(0, 0), 2 * m_(0, 1), m_(1, 1), 2 * m_(0, 2), 2 * m_(1, 2), m_(2, 2)};
}

double Conic::eval(const Point2& p) const { return eval_homogeneous(Vec3(p.x(), p.y(), 1.0)); }

Point2 Conic::center() const {
  const Eigen::Matrix2d a = m_.topLeftCorner<2, 2>();
  if (std::abs(a.determinant()) < 1e-300) {
    throw Error(ErrorCode::NotAnEllipse, "conic has no finite center");
  }
  return a.ldlt().solve(-m_.topRightCorner<2, 1>());
}

std::array<double, 2> Conic::semi_axes() const {
  if (!is_ellipse()) throw Error(ErrorCode::NotAnEllipse, "semi-axes requested for a non-ellipse");
  const Point2 c0 = center();
  const double f0 = m_(2, 2) + m_.topRightCorner<2, 1>().dot(c0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m_.topLeftCorner<2, 2>());
  const Eigen::Vector2d lam = es.eigenvalues();
  const double s0 = -f0 / lam(0);
  const double s1 = -f0 / lam(1);
  if (!(s0 > 0.0) || !(s1 > 0.0)) {
    throw Error(ErrorCode::NotAnEllipse, "imaginary ellipse");
  }
  // lam(0) <= lam(1), so the first axis is the longer one.
  return {std::sqrt(s0), std::sqrt(s1)};
}

double Conic::eccentricity() const {
  const auto ax = semi_axes();
  const double ratio = ax[1] / ax[0];
  return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

bool is_singular(const Mat3& m) {
  const double scale = m.norm();
  if (!(scale > 0.0)) return true;
  return std::abs(m.determinant()) <= 1e-12 * scale * scale * scale;
}

Conic transform_conic(const Conic& c, const Mat3& m) {
  if (is_singular(m)) throw Error(ErrorCode::SingularTransform, "conic transform is singular");
  return Conic::from_matrix(m.transpose() * c.matrix() * m);
}

Intrinsics::Intrinsics(double fx_, double fy_, double cx_, double cy_)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
}

Mat3 Intrinsics::matrix() const {
  Mat3 k;
  k << fx, 0, cx,
       0, fy, cy,
       0, 0, 1;
  return k;
}

Mat3 Intrinsics::inverse_matrix() const {
  Mat3 k;
  k << 1 / fx, 0, -cx / fx,
       0, 1 / fy, -cy / fy,
       0, 0, 1;
  return k;
}

Intrinsics Intrinsics::from_matrix(const Mat3& k) {
  if (k(0, 1) != 0.0 || k(1, 0) != 0.0 || k(2, 0) != 0.0 || k(2, 1) != 0.0 || k(2, 2) != 1.0) {
    throw Error(ErrorCode::InvalidArgument, "intrinsics matrix must be upper triangular with zero skew and K(2,2) = 1");
  }
  return Intrinsics(k(0, 0), k(1, 1), k(0, 2), k(1, 2));
}

Homography::Homography(const Mat3& h) : h_(h) {
  if (!h.allFinite() || is_singular(h)) {
    throw Error(ErrorCode::SingularTransform, "homography is singular");
  }
}

Homography Homography::inverse() const { return Homography(h_.inverse()); }

Point2 Homography::apply(const Point2& p) const {
  const Vec3 q = h_ * Vec3(p.x(), p.y(), 1.0);
  const double scale = h_.norm();
  if (std::abs(q.z()) / scale < 1e-12) {
    throw Error(ErrorCode::PointAtInfinity, "point maps to the line at infinity");
  }
  return q.head<2>() / q.z();
}

}  // namespace specnorm
