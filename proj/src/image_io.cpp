#include "specnorm/error.hpp"
#include "specnorm/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace specnorm {
namespace {

int max_code(PixelDepth depth) { return depth == PixelDepth::Bits8 ? 255 : 65535; }

std::vector<std::uint16_t> to_codes(const ScalarImage& img, PixelDepth depth) {
  const double maxval = max_code(depth);
  const double m = img.max_value();
  std::vector<std::uint16_t> codes(img.data().size());
  std::transform(img.data().begin(), img.data().end(), codes.begin(), [&](double v) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, m) / m * maxval));
  });
  return codes;
}

[[noreturn]] void io_fail(const std::string& what, const std::filesystem::path& path) {
  throw Error(ErrorCode::Io, what + ": " + path.string());
}

void skip_pgm_whitespace(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      return;
    }
  }
}

ScalarImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open", path);
  std::string magic;
  in >> magic;
  if (magic != "P5") io_fail("not a binary PGM", path);
  int w = 0, h = 0, maxval = 0;
  skip_pgm_whitespace(in);
  in >> w;
  skip_pgm_whitespace(in);
  in >> h;
  skip_pgm_whitespace(in);
  in >> maxval;
  in.get();
  if (!in || w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) io_fail("malformed PGM header", path);
  ScalarImage img(w, h, maxval);
  const bool wide = maxval > 255;
  std::vector<unsigned char> raw(img.data().size() * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) io_fail("truncated PGM data", path);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    img.data()[i] = wide ? (raw[2 * i] << 8 | raw[2 * i + 1]) : raw[i];
  }
  return img;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) io_fail("cannot open", path);
  return f;
}

void write_png_rows(const std::filesystem::path& path, int width, int height, int bit_depth, int color_type,
                    const std::vector<std::uint8_t>& bytes) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    io_fail("libpng init failed", path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    io_fail("PNG write failed", path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = bytes.size() / static_cast<std::size_t>(height);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ScalarImage read_png(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    io_fail("libpng init failed", path);
  }
  std::vector<std::uint8_t> bytes;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    io_fail("PNG read failed", path);
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  png_set_expand(png);  // palette and low-bit gray to 8 bit
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  bytes.resize(stride * height);
  for (int y = 0; y < height; ++y) png_read_row(png, bytes.data() + y * stride, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const bool wide = depth == 16;
  ScalarImage img(width, height, wide ? 65535.0 : 255.0);
  auto sample = [&](int x, int y, int c) -> double {
    const std::size_t i = y * stride + static_cast<std::size_t>(x * channels + c) * (wide ? 2 : 1);
    return wide ? (bytes[i] << 8 | bytes[i + 1]) : bytes[i];
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = channels >= 3
                         ? 0.299 * sample(x, y, 0) + 0.587 * sample(x, y, 1) + 0.114 * sample(x, y, 2)
                         : sample(x, y, 0);
    }
  }
  return img;
}

std::vector<std::uint8_t> pack(const std::vector<std::uint16_t>& codes, PixelDepth depth) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(codes.size() * (depth == PixelDepth::Bits16 ? 2 : 1));
  for (std::uint16_t c : codes) {
    if (depth == PixelDepth::Bits16) {
      bytes.push_back(static_cast<std::uint8_t>(c >> 8));
      bytes.push_back(static_cast<std::uint8_t>(c & 0xff));
    } else {
      bytes.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return bytes;
}

}  // namespace

void write_pgm(const ScalarImage& img, const std::filesystem::path& path, PixelDepth depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot open for writing", path);
  out << "P5\n" << img.width() << ' ' << img.height() << '\n' << max_code(depth) << '\n';
  const auto bytes = pack(to_codes(img, depth), depth);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_fail("write failed", path);
}

void write_png(const ScalarImage& img, const std::filesystem::path& path, PixelDepth depth) {
  write_png_rows(path, img.width(), img.height(), depth == PixelDepth::Bits8 ? 8 : 16, PNG_COLOR_TYPE_GRAY,
                 pack(to_codes(img, depth), depth));
}

void write_png(const RgbImage& img, const std::filesystem::path& path) {
  write_png_rows(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, img.rgb);
}

ScalarImage read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) io_fail("cannot open", path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
  if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') return read_png(path);
  io_fail("unsupported image format", path);
}

}  // namespace specnorm
