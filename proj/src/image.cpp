#include "specnorm/image.hpp"

#include "specnorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specnorm {

ScalarImage::ScalarImage(int width, int height, double max_value, double fill)
    : width_(width), height_(height), max_value_(max_value) {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image size");
  if (!(max_value > 0.0)) throw Error(ErrorCode::InvalidArgument, "max intensity must be positive");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

double ScalarImage::bilinear(double x, double y, double outside) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int ix = static_cast<int>(fx);
  const int iy = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  // Exact hits on the last row/column do not need the out-of-range tap.
  const int ix1 = ax > 0.0 ? ix + 1 : ix;
  const int iy1 = ay > 0.0 ? iy + 1 : iy;
  if (!contains(ix, iy) || !contains(ix1, iy1)) return outside;
  const double top = (1 - ax) * at(ix, iy) + ax * at(ix1, iy);
  const double bottom = (1 - ax) * at(ix, iy1) + ax * at(ix1, iy1);
  return (1 - ay) * top + ay * bottom;
}

double ScalarImage::bilinear_clamped(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
  return bilinear(x, y);
}

void ScalarImage::clamp() {
  for (double& v : data_) v = std::clamp(v, 0.0, max_value_);
}

void validate_roi(const RegionOfInterest& roi, const ScalarImage& img) {
  if (roi.x0 < 0 || roi.y0 < 0 || roi.x1() > img.width() || roi.y1() > img.height()) {
    throw Error(ErrorCode::InvalidArgument, "region of interest leaves the image");
  }
  if (roi.width < 16 || roi.height < 16) {
    throw Error(ErrorCode::InvalidArgument, "region of interest must be at least 16x16 pixels");
  }
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

ScalarImage quantize(const ScalarImage& img, PixelDepth depth) {
  const double maxval = depth == PixelDepth::Bits8 ? 255.0 : 65535.0;
  const double m = img.max_value();
  ScalarImage out = img;
  for (double& v : out.data()) {
    v = std::round(std::clamp(v, 0.0, m) / m * maxval) * m / maxval;
  }
  return out;
}

}  // namespace specnorm
