#pragma once

// Synthetic image formation: Phong texture of the scene plane, slanted
// perspective view through a homography, light offset and sensor noise.

#include "specnorm/geometry.hpp"
#include "specnorm/image.hpp"
#include "specnorm/rng.hpp"
#include "specnorm/specular_model.hpp"

#include <cstdint>
#include <numbers>

namespace specnorm {

struct SimParams {
  int texture_size = 406;                         // M
  double viewpoint_z = 1000.0;                    // V_Z, mm
  double roughness = 50.0;                        // n
  double slant = 58.0 * std::numbers::pi / 180.0;  // theta, radians
  double noise = 0.05;                            // sigma, fraction of m
  double light_offset = 0.0;                      // epsilon, mm
  double isovalue = 0.1;                          // t, normalized
  std::uint64_t seed = 0;
  double max_intensity = 255.0;                   // m

  /// Throws InvalidArgument when any field leaves its valid range.
  void validate() const;
  /// Same checks without the isovalue, which only the reconstruction uses.
  void validate_imaging() const;
};

/// Roughness used to size the texture window. The window stays the same
/// physical size when n is swept so steeper lobes give smaller isophotes.
inline constexpr double kWindowReferenceRoughness = 50.0;
inline constexpr double kWindowReferenceIsovalue = 0.1;

/// Mapping between texture pixels and scene-plane millimetres. Texture
/// pixel (M/2, M/2) sits on `center`.
struct TextureFrame {
  Point2 center{0.0, 0.0};
  double pixel_size = 1.0;  // mm per texture pixel
  int size = 0;

  Point2 to_scene(double i, double j) const;
  Point2 to_texture(const Point2& scene) const;
};

struct GroundTruth {
  UnitVec3 normal;           // camera frame, z > 0
  Homography homography{Mat3::Identity()};  // texture pixel -> image pixel
  Intrinsics intrinsics;
  Point2 bp_image{0.0, 0.0};
  Point2 bp_scene{0.0, 0.0};
  Vec3 light{0.0, 0.0, 0.0};
};

/// L = V + eps (cos a, sin a, b), a ~ U[0, 2pi), b ~ U[-0.5, 0.5].
/// Draws nothing when eps = 0.
Vec3 perturb_light(const Vec3& viewpoint, double eps, Rng& rng);

/// Point of perfect reflection on the scene plane for viewpoint V and light L.
Point2 brightest_point(const Vec3& viewpoint, const Vec3& light);

/// Texture window for a given light: centred on the BP, side
/// 4 * r_minus(t = 0.1, n = 50).
TextureFrame texture_frame(const SimParams& params, const Vec3& light);

/// M x M Phong texture scaled so that c maps to m.
ScalarImage render_texture(const SimParams& params, const Vec3& light);

struct ViewGeometry {
  Homography homography;
  GroundTruth truth;
};

/// Virtual camera with f = M, principal point (M/2, M/2), rotated by theta
/// about its x-axis, optical axis through the texture centre. The camera
/// distance makes the texture span the image at theta = 0.
ViewGeometry build_view_homography(const SimParams& params);

/// Inverse warp with bilinear sampling; samples leaving the source read 0.
ScalarImage warp_image(const ScalarImage& src, const Homography& h, int out_width, int out_height);

/// Adds N(0, (sigma m)^2) per pixel, then clamps to [0, m].
ScalarImage add_noise(const ScalarImage& img, double sigma, Rng& rng);

struct SimulatedView {
  ScalarImage image;  // warped and noisy, before any preprocessing
  GroundTruth truth;
};

/// Full forward pipeline for one trial; pure function of (params, rng state).
SimulatedView simulate(const SimParams& params, Rng& rng);

}  // namespace specnorm
