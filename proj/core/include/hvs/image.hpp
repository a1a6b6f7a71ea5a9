#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace hvs {

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
};

/// Row-major interleaved RGB8 image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 0) {}

  Rgb at(int x, int y) const {
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
  }
  bool operator==(const Image& o) const {
    return width == o.width && height == o.height && rgb == o.rgb;
  }
};

/// Decode a PNG/JPEG file. Throws Error (missing file, undecodable bytes).
Image load_image(const std::filesystem::path& path);

/// Decode from an in-memory PNG/JPEG buffer. Throws Error.
Image decode_image(const std::vector<uint8_t>& bytes);

/// Lossless PNG encoding (used for wire transfer and CLI output).
std::vector<uint8_t> encode_png(const Image& img);
void save_png(const Image& img, const std::filesystem::path& path);

}  // namespace hvs
