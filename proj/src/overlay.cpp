#include "specnorm/harness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace specnorm {
namespace {

struct Colour {
  std::uint8_t r, g, b;
};

void draw_line(RgbImage& img, const Point2& a, const Point2& b, Colour c) {
  const double len = (b - a).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2)));
  for (int s = 0; s <= steps; ++s) {
    const Point2 p = a + (b - a) * (static_cast<double>(s) / steps);
    img.set(static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y())), c.r, c.g, c.b);
  }
}

void draw_ellipse(RgbImage& img, const Conic& conic, Colour c) {
  if (!conic.is_ellipse()) return;
  const Point2 centre = conic.center();
  const auto axes = conic.semi_axes();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(conic.matrix().topLeftCorner<2, 2>());
  const Point2 major = es.eigenvectors().col(0);
  const Point2 minor = es.eigenvectors().col(1);
  constexpr int kSegments = 256;
  Point2 prev = centre + axes[0] * major;
  for (int s = 1; s <= kSegments; ++s) {
    const double phi = 2.0 * std::numbers::pi * s / kSegments;
    const Point2 p = centre + axes[0] * std::cos(phi) * major + axes[1] * std::sin(phi) * minor;
    draw_line(img, prev, p, c);
    prev = p;
  }
}

void draw_normal(RgbImage& img, const Point2& at, const UnitVec3& n, const Intrinsics& k, Colour c) {
  const Vec3 ray = k.inverse_matrix() * Vec3(at.x(), at.y(), 1.0);
  const Vec3 tip = ray + 0.25 * ray.norm() * n.vec();
  const Vec3 px = k.matrix() * tip;
  Point2 dir = px.head<2>() / px.z() - at;
  constexpr double kArrow = 40.0;
  if (dir.norm() < 1e-9) {
    draw_line(img, at - Point2(2, 0), at + Point2(2, 0), c);
    draw_line(img, at - Point2(0, 2), at + Point2(0, 2), c);
    return;
  }
  dir = dir.normalized() * kArrow;
  const Point2 end = at + dir;
  draw_line(img, at, end, c);
  const Point2 back = -dir.normalized() * 8.0;
  const Point2 side(-back.y(), back.x());
  draw_line(img, end, end + back + 0.5 * side, c);
  draw_line(img, end, end + back - 0.5 * side, c);
}

}  // namespace

RgbImage render_overlay(const ScalarImage& img, const std::vector<RoiOutcome>& outcomes) {
  RgbImage out{img.width(), img.height(), {}};
  out.rgb.resize(3 * static_cast<std::size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto g = static_cast<std::uint8_t>(std::lround(std::clamp(img.at(x, y) / img.max_value(), 0.0, 1.0) * 255));
      out.set(x, y, g, g, g);
    }
  }
  for (const auto& o : outcomes) {
    const RegionOfInterest& r = o.roi;
    const Colour box = o.result ? Colour{80, 160, 255} : Colour{255, 60, 60};
    draw_line(out, Point2(r.x0, r.y0), Point2(r.x1() - 1, r.y0), box);
    draw_line(out, Point2(r.x1() - 1, r.y0), Point2(r.x1() - 1, r.y1() - 1), box);
    draw_line(out, Point2(r.x1() - 1, r.y1() - 1), Point2(r.x0, r.y1() - 1), box);
    draw_line(out, Point2(r.x0, r.y1() - 1), Point2(r.x0, r.y0), box);
    if (!o.result) continue;
    const SpecularityResult& s = *o.result;
    draw_ellipse(out, s.fit.conic, {0, 255, 0});
    const Point2 centre = s.fit.conic.center();
    draw_normal(out, centre, s.normals.n_plus, s.intrinsics, {255, 140, 0});
    draw_normal(out, centre, s.normals.n_minus, s.intrinsics, {255, 0, 255});
  }
  return out;
}

}  // namespace specnorm
