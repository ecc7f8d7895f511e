#include "specnorm/selftest.hpp"

#include "specnorm/reconstruction.hpp"
#include "specnorm/rng.hpp"
#include "specnorm/specular_model.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace specnorm {
namespace {

std::string describe(const char* label, double worst, double limit) {
  std::ostringstream s;
  s << label << " worst " << worst << " (limit " << limit << ")";
  return s.str();
}

CheckResult circle_identity(Rng& rng, int samples) {
  double worst_root = 0.0;
  double worst_product = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double kappa = rng.uniform(0.01, 0.99);
    const double vz = rng.uniform(10.0, 5000.0);
    const Vec3 v(rng.uniform(-100, 100), rng.uniform(-100, 100), vz);
    const CirclePair radii = circle_radii(kappa, vz);
    const double phi = rng.uniform(0.0, 2 * std::numbers::pi);
    const Point2 dir(std::cos(phi), std::sin(phi));
    const double scale = kappa * std::pow(vz, 4);
    for (double r : {radii.r_minus, radii.r_plus}) {
      worst_root = std::max(worst_root, std::abs(endoscopic_isocurve_eval(v.head<2>() + r * dir, v, kappa)) / scale);
    }
    worst_product = std::max(worst_product, std::abs(radii.r_minus * radii.r_plus / (vz * vz) - 1.0));
  }
  const bool ok = worst_root < 1e-9 && worst_product < 1e-9;
  return {"circle-identity", ok, describe("E(r)/(kappa Vz^4)", worst_root, 1e-9) + "; " +
                                     describe("|r- r+/Vz^2 - 1|", worst_product, 1e-9)};
}

CheckResult specialization(Rng& rng, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec3 v(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(10, 2000));
    const SceneConfig cfg = SceneConfig::endoscopic(v, rng.uniform(1, 200));
    const IsoLevel level = IsoLevel::from_kappa(rng.uniform(0.01, 0.99), cfg.roughness);
    const Point2 p = v.head<2>() + Point2(rng.uniform(-3, 3), rng.uniform(-3, 3)) * v.z();
    const double q = general_isocurve_eval(p, cfg, level);
    const double e = endoscopic_isocurve_eval(p, v, level.kappa());
    worst = std::max(worst, std::abs(q - e) / std::max(std::abs(e), 1e-300));
  }
  return {"endoscopic-specialization", worst < 1e-9, describe("relative |Q - E|", worst, 1e-9)};
}

CheckResult backprojection(Rng& rng, int samples) {
  const Intrinsics k(800, 800, 320, 240);
  double worst = 0.0;
  double worst_scale = 0.0;
  int failures = 0;
  for (int i = 0; i < samples; ++i) {
    const double slant = rng.uniform(0.0, 80.0) * std::numbers::pi / 180.0;
    const double azimuth = rng.uniform(0.0, 2 * std::numbers::pi);
    const UnitVec3 truth(std::sin(slant) * std::cos(azimuth), std::sin(slant) * std::sin(azimuth), std::cos(slant));
    const Vec3 centre = Vec3(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), 1.0) * rng.uniform(2.0, 10.0);
    const double radius = rng.uniform(0.02, 0.08) * centre.z();
    const Vec3 u = truth.vec().unitOrthogonal();
    const Vec3 w = truth.vec().cross(u);
    // Scaling centre and radius together leaves the image unchanged.
    auto normals_for = [&](double scale) {
      std::vector<Point2> pts;
      for (int s = 0; s < 24; ++s) {
        const double phi = 2 * std::numbers::pi * s / 24;
        const Vec3 x = k.matrix() * (scale * (centre + radius * (std::cos(phi) * u + std::sin(phi) * w)));
        pts.push_back(x.head<2>() / x.z());
      }
      return backproject_circle(normalize_to_camera(fit_ellipse(pts).conic, k));
    };
    try {
      const NormalPair a = normals_for(1.0);
      worst = std::max(worst, angular_error(a, truth) * std::numbers::pi / 180.0);
      const NormalPair b = normals_for(10.0);
      worst_scale = std::max({worst_scale, angle_between(a.n_plus, b.n_plus), angle_between(a.n_minus, b.n_minus)});
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const bool ok = failures == 0 && worst < 1e-6 && worst_scale < 1e-9;
  return {"backprojection-round-trip", ok,
          describe("angle to truth [rad]", worst, 1e-6) + "; " + describe("10x scale drift [rad]", worst_scale, 1e-9) +
              "; failures " + std::to_string(failures)};
}

}  // namespace

std::vector<CheckResult> run_analytic_checks(std::uint64_t seed, int samples) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(circle_identity(rng, samples));
  out.push_back(specialization(rng, samples));
  out.push_back(backprojection(rng, samples));
  return out;
}

}  // namespace specnorm
