#pragma once

// Preprocessing and sub-pixel level-set tracing of a specularity.

#include "specnorm/geometry.hpp"
#include "specnorm/image.hpp"

#include <string>
#include <vector>

namespace specnorm {

inline constexpr double kDefaultBlurSigma = 2.0;
inline constexpr std::size_t kMinPolylinePoints = 12;

/// Separable Gaussian, kernel truncated at ceil(3 sigma), mirror-reflected
/// borders (the edge pixel is not repeated). sigma = 0 is the identity.
ScalarImage gaussian_smooth(const ScalarImage& img, double sigma);

/// Normalized 1D kernel of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

struct NormalizedImage {
  ScalarImage image;  // max inside the ROI is 1
  Point2 bp{0.0, 0.0};
  bool bp_on_boundary = false;
  bool saturated = false;  // >= 0.5% of the ROI sits at m
};

/// Divides by the ROI maximum and returns its location as the BP estimate.
/// Throws NoSpecularity on a flat ROI.
NormalizedImage normalize_bp(const ScalarImage& img, const RegionOfInterest& roi);

struct IsophotePolyline {
  std::vector<Point2> points;
  bool closed = false;

  /// Absolute shoelace area; open chains are treated as implicitly closed.
  double area() const;
  bool contains(const Point2& p) const;
};

struct ExtractionResult {
  std::vector<IsophotePolyline> polylines;  // descending area
  std::size_t discarded_short = 0;
  std::vector<std::string> diagnostics;
};

/// Marching squares at level t over the pixel grid restricted to the ROI.
/// Crossings are linearly interpolated on cell edges; saddles are resolved
/// by comparing the cell mean with t.
ExtractionResult extract_isophote(const ScalarImage& img, const RegionOfInterest& roi, double t);

struct IsophoteSelection {
  IsophotePolyline polyline;
  bool contains_bp = false;
  bool clipped = false;  // open chain, cut by the ROI
};

/// Largest closed loop around the BP, else the largest closed loop, else
/// the longest open chain (flagged as clipped). Throws SelectionFailed on
/// an empty list.
IsophoteSelection select_primary_isophote(const std::vector<IsophotePolyline>& polylines, const Point2& bp);

}  // namespace specnorm
