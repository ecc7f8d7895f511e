#pragma once

#include "specnorm/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace specnorm {

/// Row-major grid of real intensities. max_value is the intensity
/// convention m (255 for 8-bit data), not the observed maximum.
class ScalarImage {
 public:
  ScalarImage() = default;
  ScalarImage(int width, int height, double max_value = 255.0, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double max_value() const { return max_value_; }
  void set_max_value(double m) { max_value_ = m; }

  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  /// Bilinear sample with pixel centers at integer coordinates; `outside`
  /// is returned when any of the four taps leaves the grid.
  double bilinear(double x, double y, double outside = 0.0) const;
  /// Bilinear sample that clamps taps to the grid instead.
  double bilinear_clamped(double x, double y) const;

  /// Clamps every value into [0, max_value].
  void clamp();

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  double max_value_ = 255.0;
  std::vector<double> data_;
};

struct RegionOfInterest {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  static RegionOfInterest full(const ScalarImage& img) { return {0, 0, img.width(), img.height()}; }
  int x1() const { return x0 + width; }  // exclusive
  int y1() const { return y0 + height; }
  bool contains(int x, int y) const { return x >= x0 && y >= y0 && x < x1() && y < y1(); }
  bool on_border(int x, int y) const { return x == x0 || y == y0 || x == x1() - 1 || y == y1() - 1; }
};

/// Throws InvalidArgument if the ROI leaves the image or is smaller than 16x16.
void validate_roi(const RegionOfInterest& roi, const ScalarImage& img);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // interleaved, row-major

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

enum class PixelDepth { Bits8, Bits16 };

/// Binary PGM (P5). Values in [0, m] are scaled to [0, maxval] and rounded.
void write_pgm(const ScalarImage& img, const std::filesystem::path& path, PixelDepth depth);
/// Grayscale PNG, same scaling as write_pgm.
void write_png(const ScalarImage& img, const std::filesystem::path& path, PixelDepth depth);
void write_png(const RgbImage& img, const std::filesystem::path& path);

/// Reads P5 PGM or PNG (gray, gray+alpha, RGB, RGBA, 8 or 16 bit). Colour is
/// converted to Rec. 601 luminance. The returned max_value is the file's
/// maxval, so intensities keep their stored integer values.
ScalarImage read_image(const std::filesystem::path& path);

/// Rounds every value to the integer grid of the given depth, keeping the
/// [0, m] scale. Equivalent to an export/import round trip.
ScalarImage quantize(const ScalarImage& img, PixelDepth depth);

}  // namespace specnorm
