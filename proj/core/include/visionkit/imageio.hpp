#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "visionkit/image.hpp"

namespace visionkit {

/// P2 or P5. maxval <= 255 gives U8, up to 65535 gives U16 (big-endian
/// samples in P5). Sample values are kept as stored, never rescaled.
Image decode_pgm(std::string_view bytes);
Image read_pgm(const std::filesystem::path& path);

/// P5 with maxval 255 for U8 and 65535 for U16. Other kinds are rejected;
/// convert first.
std::string encode_pgm(const Image& img);
void write_pgm(const Image& img, const std::filesystem::path& path);

/// P3 or P6 with maxval <= 255.
RgbImage decode_ppm(std::string_view bytes);
RgbImage read_ppm(const std::filesystem::path& path);

std::string encode_ppm(const RgbImage& img);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);

/// 0.299 R + 0.587 G + 0.114 B, as F64.
Image as_grey(const RgbImage& rgb);

/// Reads either PGM (returned as is) or PPM (through as_grey), by magic.
Image read_grey(const std::filesystem::path& path);

}  // namespace visionkit
