#include "specnorm/simulator.hpp"

#include "specnorm/error.hpp"

#include <cmath>

namespace specnorm {

void SimParams::validate() const {
  validate_imaging();
  if (!(isovalue > 0.0 && isovalue < 1.0)) throw Error(ErrorCode::InvalidArgument, "isovalue must lie in (0, 1)");
}

void SimParams::validate_imaging() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (texture_size < 32) fail("texture size must be at least 32");
  if (!(viewpoint_z > 0.0)) fail("camera distance must be positive");
  if (!(roughness > 0.0)) fail("roughness must be positive");
  if (!(slant >= 0.0 && slant < std::numbers::pi / 2)) fail("slant must lie in [0, pi/2)");
  if (!(noise >= 0.0)) fail("noise level must be non-negative");
  if (!(light_offset >= 0.0)) fail("light offset must be non-negative");
  if (!(max_intensity > 0.0)) fail("max intensity must be positive");
}

Point2 TextureFrame::to_scene(double i, double j) const {
  const double half = 0.5 * size;
  return center + pixel_size * Point2(i - half, j - half);
}

Point2 TextureFrame::to_texture(const Point2& scene) const {
  const double half = 0.5 * size;
  return (scene - center) / pixel_size + Point2(half, half);
}

Vec3 perturb_light(const Vec3& viewpoint, double eps, Rng& rng) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "light offset must be non-negative");
  if (eps == 0.0) return viewpoint;
  const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double beta = rng.uniform(-0.5, 0.5);
  return viewpoint + eps * Vec3(std::cos(alpha), std::sin(alpha), beta);
}

Point2 brightest_point(const Vec3& viewpoint, const Vec3& light) {
  const double denom = viewpoint.z() + light.z();
  if (!(viewpoint.z() > 0.0) || !(light.z() > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "camera and light must lie above the scene plane");
  }
  const double s = viewpoint.z() / denom;
  return viewpoint.head<2>() + s * (light.head<2>() - viewpoint.head<2>());
}

TextureFrame texture_frame(const SimParams& params, const Vec3& light) {
  const Vec3 viewpoint(0.0, 0.0, params.viewpoint_z);
  const IsoLevel ref = IsoLevel::from_intensity(kWindowReferenceIsovalue, 1.0, kWindowReferenceRoughness);
  const double window = 4.0 * circle_radii(ref.kappa(), params.viewpoint_z).r_minus;
  TextureFrame frame;
  frame.center = brightest_point(viewpoint, light);
  frame.pixel_size = window / params.texture_size;
  frame.size = params.texture_size;
  return frame;
}

ScalarImage render_texture(const SimParams& params, const Vec3& light) {
  params.validate_imaging();
  SceneConfig scene;
  scene.viewpoint = Vec3(0.0, 0.0, params.viewpoint_z);
  scene.light = light;
  scene.roughness = params.roughness;
  scene.scale = 1.0;
  scene.validate();
  const TextureFrame frame = texture_frame(params, light);
  const int m = params.texture_size;
  ScalarImage img(m, m, params.max_intensity);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      img.at(i, j) = params.max_intensity * phong_intensity(frame.to_scene(i, j), scene);
    }
  }
  return img;
}

ViewGeometry build_view_homography(const SimParams& params) {
  params.validate_imaging();
  const double m = params.texture_size;
  const Intrinsics k(m, m, m / 2, m / 2);
  const TextureFrame frame = texture_frame(params, Vec3(0.0, 0.0, params.viewpoint_z));
  const double window = frame.pixel_size * m;
  const double c = std::cos(params.slant);
  const double s = std::sin(params.slant);
  // At theta = 0 the texture fills the image exactly (H is the identity).
  const double distance = window * k.fx / m;
  // Columns: rotated scene x-axis, rotated scene y-axis, translation.
  Mat3 pose;
  pose << 1, 0, 0,
          0, c, 0,
          0, s, distance;
  Mat3 texture_to_scene;
  texture_to_scene << frame.pixel_size, 0, -frame.pixel_size * m / 2,
                      0, frame.pixel_size, -frame.pixel_size * m / 2,
                      0, 0, 1;
  Homography h(k.matrix() * pose * texture_to_scene);

  GroundTruth truth;
  truth.normal = UnitVec3(0.0, -s, c);
  truth.homography = h;
  truth.intrinsics = k;
  truth.bp_image = h.apply(Point2(m / 2, m / 2));
  return {h, truth};
}

namespace {

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

}  // namespace

ScalarImage warp_image(const ScalarImage& src, const Homography& h, int out_width, int out_height) {
  const Mat3 inv = h.inverse().matrix();
  ScalarImage out(out_width, out_height, src.max_value());
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const Vec3 q = inv * Vec3(x, y, 1.0);
      if (!(q.z() > 1e-12 * inv.norm())) continue;
      out.at(x, y) = src.bilinear(snap(q.x() / q.z()), snap(q.y() / q.z()), 0.0);
    }
  }
  return out;
}

ScalarImage add_noise(const ScalarImage& img, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be non-negative");
  if (sigma == 0.0) return img;
  ScalarImage out = img;
  const double std_dev = sigma * img.max_value();
  for (double& v : out.data()) v += std_dev * rng.normal();
  out.clamp();
  return out;
}

SimulatedView simulate(const SimParams& params, Rng& rng) {
  params.validate_imaging();
  const Vec3 viewpoint(0.0, 0.0, params.viewpoint_z);
  const Vec3 light = perturb_light(viewpoint, params.light_offset, rng);
  const ScalarImage texture = render_texture(params, light);
  ViewGeometry view = build_view_homography(params);
  ScalarImage image = warp_image(texture, view.homography, params.texture_size, params.texture_size);
  image = add_noise(image, params.noise, rng);
  view.truth.light = light;
  view.truth.bp_scene = brightest_point(viewpoint, light);
  return {std::move(image), view.truth};
}

}  // namespace specnorm
