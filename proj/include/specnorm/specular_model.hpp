#pragma once

// Phong specular forward model on the scene plane z = 0, its quartic
// isocurves, and the concentric-circle factorization that holds when the
// light is co-located with the camera.

#include "specnorm/geometry.hpp"

namespace specnorm {

struct SceneConfig {
  Vec3 viewpoint{0.0, 0.0, 1000.0};
  Vec3 light{0.0, 0.0, 1000.0};
  double roughness = 50.0;  // Phong exponent n
  double scale = 1.0;       // c: albedo, light power and camera gain combined

  /// Throws InvalidArgument unless V_Z > 0, n > 0 and c > 0.
  void validate() const;
  /// Mirror of the light through the scene plane.
  Vec3 mirrored_light() const { return {light.x(), light.y(), -light.z()}; }
  static SceneConfig endoscopic(const Vec3& viewpoint, double roughness, double scale = 1.0);
};

enum class LevelKind {
  Regular,          // 0 < kappa < 1
  BrightestPoint,   // t = c, kappa = 0: the isophote collapses onto the BP
  OuterRing,        // t = 0, kappa = 1: double circle of radius |V_Z|
};

/// Intensity level t together with tau = (t/c)^(1/n) and kappa = 1 - tau^2.
class IsoLevel {
 public:
  /// Requires 0 <= t <= c; t outside that range throws OutOfDomain.
  static IsoLevel from_intensity(double t, double scale, double roughness);
  /// Requires 0 <= kappa <= 1. Sets c = 1 and picks t accordingly.
  static IsoLevel from_kappa(double kappa, double roughness);

  double intensity() const { return t_; }
  double tau() const { return tau_; }
  double kappa() const { return kappa_; }
  LevelKind kind() const;

 private:
  IsoLevel(double t, double tau, double kappa) : t_(t), tau_(tau), kappa_(kappa) {}
  double t_;
  double tau_;
  double kappa_;
};

struct CirclePair {
  Point2 center{0.0, 0.0};
  double r_minus = 0.0;
  double r_plus = 0.0;
  bool double_circle = false;  // kappa = 1: both circles coincide with the outer ring
};

struct Circle {
  Point2 center{0.0, 0.0};
  double radius = 0.0;
};

/// c * max(0, cos beta)^n at P = (p, 0). Throws DegenerateGeometry when P
/// coincides with V or with the mirrored light.
double phong_intensity(const Point2& p, const SceneConfig& cfg);

/// Q(p) = ((R-P).(V-P))^2 - tau^2 |R-P|^2 |V-P|^2.
double general_isocurve_eval(const Point2& p, const SceneConfig& cfg, const IsoLevel& level);

/// E(p) = kappa d^4 + 2 V_Z^2 (kappa - 2) d^2 + kappa V_Z^4, d = |p - V_XY|.
double endoscopic_isocurve_eval(const Point2& p, const Vec3& viewpoint, double kappa);

/// Radii of the two circles E = 0 factors into. kappa in (0, 1]; kappa = 1
/// returns the double circle flagged as such.
CirclePair circle_radii(double kappa, double viewpoint_z);

/// Inner circle of the endoscopic isocurve, which is the observable isophote.
/// Throws EmptyIsophote for t >= c and OutOfDomain for t <= 0.
Circle isophote_circle(const IsoLevel& level, const Vec3& viewpoint);

}  // namespace specnorm
