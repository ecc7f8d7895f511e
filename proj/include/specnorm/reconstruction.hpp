#pragma once

// Ellipse fitting and single-conic circle backprojection.

#include "specnorm/geometry.hpp"

#include <span>

namespace specnorm {

struct FitDiagnostics {
  double rms_algebraic = 0.0;  // on the conditioned points, unit-norm coefficients
  double rms_distance = 0.0;   // first-order (Sampson) point-to-conic distance, input units
  std::size_t point_count = 0;
  double eccentricity = 0.0;
  double conditioning = 0.0;   // reciprocal condition of the linear scatter block
};

struct EllipseFit {
  Conic conic;
  FitDiagnostics diagnostics;
};

/// Direct least-squares ellipse fit with the 4ac - b^2 = 1 constraint,
/// solved through the reduced 3x3 eigenproblem of the block-decomposed
/// scatter matrix. Points are centred and scaled to RMS sqrt(2) first.
EllipseFit fit_ellipse(std::span<const Point2> points);

/// |Q(p)| / |grad Q(p)|.
double sampson_distance(const Conic& c, const Point2& p);

/// K^T C K: the image conic expressed on the normalized camera plane.
Conic normalize_to_camera(const Conic& c, const Intrinsics& k);

/// The two plane normals consistent with a circle imaged as `cn`, both
/// oriented with positive z. `axis` is the major eigenvector e1 that
/// separates them: n_plus has a non-negative component along it.
struct NormalPair {
  UnitVec3 n_plus;
  UnitVec3 n_minus;
  Vec3 axis{1.0, 0.0, 0.0};
  bool degenerate = false;  // fronto-parallel: the two normals coincide
};

NormalPair backproject_circle(const Conic& cn);

/// Smallest angle between the truth and either candidate, in degrees.
double angular_error(const NormalPair& pair, const UnitVec3& truth);

/// Angle to the candidate on the same side of the separating axis as the
/// truth, in degrees.
double oracle_sign_error(const NormalPair& pair, const UnitVec3& truth);

}  // namespace specnorm
