#include "specnorm/specular_model.hpp"

#include "specnorm/error.hpp"

#include <cmath>

namespace specnorm {

void SceneConfig::validate() const {
  if (!viewpoint.allFinite() || !light.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "scene positions must be finite");
  }
  if (!(viewpoint.z() > 0.0)) throw Error(ErrorCode::InvalidArgument, "viewpoint must lie above the scene plane");
  if (!(roughness > 0.0)) throw Error(ErrorCode::InvalidArgument, "roughness must be positive");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "intensity scale must be positive");
}

SceneConfig SceneConfig::endoscopic(const Vec3& viewpoint, double roughness, double scale) {
  SceneConfig cfg{viewpoint, viewpoint, roughness, scale};
  cfg.validate();
  return cfg;
}

IsoLevel IsoLevel::from_intensity(double t, double scale, double roughness) {
  if (!(scale > 0.0) || !(roughness > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "scale and roughness must be positive");
  }
  if (!(t >= 0.0) || t > scale) {
    throw Error(ErrorCode::OutOfDomain, "isovalue must lie in [0, c]");
  }
  const double tau = std::pow(t / scale, 1.0 / roughness);
  // 1 - tau^2 loses everything when tau is close to one; go through the log.
  const double kappa = (t > 0.0) ? -std::expm1(2.0 * std::log(t / scale) / roughness) : 1.0;
  return IsoLevel(t, tau, kappa);
}

IsoLevel IsoLevel::from_kappa(double kappa, double roughness) {
  if (!(kappa >= 0.0) || kappa > 1.0) throw Error(ErrorCode::OutOfDomain, "kappa must lie in [0, 1]");
  if (!(roughness > 0.0)) throw Error(ErrorCode::InvalidArgument, "roughness must be positive");
  const double tau = std::sqrt(1.0 - kappa);
  return IsoLevel(std::pow(tau, roughness), tau, kappa);
}

LevelKind IsoLevel::kind() const {
  if (kappa_ <= 0.0) return LevelKind::BrightestPoint;
  if (kappa_ >= 1.0) return LevelKind::OuterRing;
  return LevelKind::Regular;
}

double phong_intensity(const Point2& p, const SceneConfig& cfg) {
  const Vec3 point(p.x(), p.y(), 0.0);
  const Vec3 to_view = cfg.viewpoint - point;
  const Vec3 to_mirror = cfg.mirrored_light() - point;
  const double nv = to_view.norm();
  const double nr = to_mirror.norm();
  if (!(nv > 0.0) || !(nr > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "surface point coincides with the viewpoint or mirrored light");
  }
  const double cos_beta = -to_view.dot(to_mirror) / (nv * nr);
  if (cos_beta <= 0.0) return 0.0;
  return cfg.scale * std::pow(std::min(cos_beta, 1.0), cfg.roughness);
}

double general_isocurve_eval(const Point2& p, const SceneConfig& cfg, const IsoLevel& level) {
  const Vec3 point(p.x(), p.y(), 0.0);
  const Vec3 rp = cfg.mirrored_light() - point;
  const Vec3 vp = cfg.viewpoint - point;
  const double dot = rp.dot(vp);
  const double tau2 = level.tau() * level.tau();
  return dot * dot - tau2 * rp.squaredNorm() * vp.squaredNorm();
}

double endoscopic_isocurve_eval(const Point2& p, const Vec3& viewpoint, double kappa) {
  const double dx = p.x() - viewpoint.x();
  const double dy = p.y() - viewpoint.y();
  const double d2 = dx * dx + dy * dy;
  const double z2 = viewpoint.z() * viewpoint.z();
  return kappa * d2 * d2 + 2.0 * z2 * (kappa - 2.0) * d2 + kappa * z2 * z2;
}

CirclePair circle_radii(double kappa, double viewpoint_z) {
  if (!(kappa > 0.0) || kappa > 1.0) throw Error(ErrorCode::OutOfDomain, "kappa must lie in (0, 1]");
  if (viewpoint_z == 0.0 || !std::isfinite(viewpoint_z)) {
    throw Error(ErrorCode::OutOfDomain, "viewpoint height must be nonzero");
  }
  const double z = std::abs(viewpoint_z);
  CirclePair out;
  if (kappa == 1.0) {
    out.r_minus = out.r_plus = z;
    out.double_circle = true;
    return out;
  }
  const double a = (2.0 - kappa) / kappa;
  // sqrt(a^2 - 1) written as a product to keep precision near a = 1.
  const double root = std::sqrt((a - 1.0) * (a + 1.0));
  const double big = a + root;
  out.r_plus = z * std::sqrt(big);
  // (a - root)(a + root) = 1 avoids the cancellation in a - root.
  out.r_minus = z / std::sqrt(big);
  return out;
}

Circle isophote_circle(const IsoLevel& level, const Vec3& viewpoint) {
  switch (level.kind()) {
    case LevelKind::BrightestPoint:
      throw Error(ErrorCode::EmptyIsophote, "isovalue at or above the specular peak has no isophote curve");
    case LevelKind::OuterRing:
      throw Error(ErrorCode::OutOfDomain, "isovalue must be positive");
    case LevelKind::Regular:
      break;
  }
  const CirclePair radii = circle_radii(level.kappa(), viewpoint.z());
  return Circle{Point2(viewpoint.x(), viewpoint.y()), radii.r_minus};
}

}  // namespace specnorm
