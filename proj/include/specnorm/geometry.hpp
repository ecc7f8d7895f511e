#pragma once

#include <Eigen/Core>

#include <array>

namespace specnorm {

using Vec3 = Eigen::Vector3d;
using Point2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Unit-length 3-vector. Construction normalizes; zero input throws.
class UnitVec3 {
 public:
  UnitVec3() : v_(0.0, 0.0, 1.0) {}
  explicit UnitVec3(const Vec3& v);
  UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  UnitVec3 operator-() const { return UnitVec3(-v_); }

 private:
  Vec3 v_;
};

/// Angle between two unit vectors in radians, stable near 0 and pi.
double angle_between(const UnitVec3& a, const UnitVec3& b);

enum class ConicKind { Ellipse, Other };

/// Point-conic x^T C x = 0, stored as its canonical representative:
/// unit Frobenius norm, sign chosen so the largest-magnitude diagonal
/// entry is positive (ties go to the lowest index).
class Conic {
 public:
  /// The unit circle.
  Conic();
  static Conic from_coeffs(double a, double b, double c, double d, double e, double f);
  /// Symmetrizes the input before normalizing.
  static Conic from_matrix(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  /// (a, b, c, d, e, f) of ax^2 + bxy + cy^2 + dx + ey + f.
  std::array<double, 6> coeffs() const;
  ConicKind kind() const { return kind_; }
  bool is_ellipse() const { return kind_ == ConicKind::Ellipse; }

  double eval(const Point2& p) const;
  double eval_homogeneous(const Vec3& x) const { return x.dot(m_ * x); }

  /// Ellipse center. Requires is_ellipse().
  Point2 center() const;
  /// Semi-axes (major, minor). Requires a real ellipse.
  std::array<double, 2> semi_axes() const;
  double eccentricity() const;

  /// Frobenius distance between canonical representatives.
  double distance(const Conic& other) const { return (m_ - other.m_).norm(); }

 private:
  explicit Conic(const Mat3& canonical);
  Mat3 m_;
  ConicKind kind_;
};

/// C' = M^T C M: if p lies on C then M^-1 p lies on C'.
Conic transform_conic(const Conic& c, const Mat3& m);

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Intrinsics() = default;
  Intrinsics(double fx, double fy, double cx, double cy);

  Mat3 matrix() const;
  Mat3 inverse_matrix() const;
  /// Requires zero skew and a canonical last row.
  static Intrinsics from_matrix(const Mat3& k);
};

inline Mat3 intrinsics_matrix(const Intrinsics& k) { return k.matrix(); }

class Homography {
 public:
  explicit Homography(const Mat3& h);

  const Mat3& matrix() const { return h_; }
  Homography inverse() const;
  Homography operator*(const Homography& rhs) const { return Homography(h_ * rhs.h_); }

  /// Projective transfer with dehomogenization.
  Point2 apply(const Point2& p) const;

 private:
  Mat3 h_;
};

inline Point2 apply_homography_point(const Homography& h, const Point2& p) { return h.apply(p); }

/// Scale-relative singularity test shared by conic transforms and homographies.
bool is_singular(const Mat3& m);

}  // namespace specnorm
