#ifndef DOMAINSCOPE_IMAGE_HPP
#define DOMAINSCOPE_IMAGE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace domainscope {

/// Interleaved 8-bit raster as decoded from disk. RGB order for 3 channels.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;  // row-major, interleaved

  bool empty() const { return width == 0 || height == 0; }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Single-channel luminance image, values in [0, 255].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
};

/// One boolean per pixel; true = pixel is included.
struct PixelMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 0/1, row-major

  PixelMask() = default;
  PixelMask(int w, int h, bool fill = false)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

/// Per-pixel relative depth in the source model's native scale. A pixel is
/// valid when the map carries no mask or the mask bit is set.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;          // row-major
  std::vector<std::uint8_t> valid;     // empty => all valid

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  bool is_valid(int x, int y) const {
    return valid.empty() || valid[static_cast<std::size_t>(y) * width + x] != 0;
  }
  bool empty() const { return values.empty(); }
};

/// Per-pixel horizontal/vertical Sobel responses; dimensions match the source.
struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
};

}  // namespace domainscope

#endif  // DOMAINSCOPE_IMAGE_HPP
