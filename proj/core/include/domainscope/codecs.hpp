#ifndef DOMAINSCOPE_CODECS_HPP
#define DOMAINSCOPE_CODECS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "domainscope/image.hpp"

namespace domainscope {

/// Decode an 8-bit PNG or baseline JPEG into interleaved RGB8. The format
/// is sniffed from the file's magic bytes; anything else is rejected.
/// Palette, grayscale and alpha PNG variants are expanded/stripped to RGB.
/// Throws std::runtime_error with the path on any failure.
RasterImage decode_image(const std::string& path);

/// Encode interleaved RGB8 as PNG. Used by fixture generators and tools.
void write_png_rgb8(const RasterImage& img, const std::string& path);

/// Encode a 16-bit grayscale PNG (the depth raster carrier).
void write_png_gray16(const std::vector<std::uint16_t>& values, int width, int height,
                      const std::string& path);

/// Encode interleaved RGB8 as baseline JPEG.
void write_jpeg_rgb8(const RasterImage& img, const std::string& path, int quality = 90);

/// Read a 16-bit grayscale PNG back as raw sample values (row-major).
/// Rejects any other PNG layout.
std::vector<std::uint16_t> read_png_gray16(const std::string& path, int& width, int& height);

}  // namespace domainscope

#endif  // DOMAINSCOPE_CODECS_HPP
