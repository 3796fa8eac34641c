#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "visionkit/image.hpp"
#include "visionkit/surf.hpp"

namespace visionkit::cli {

inline constexpr std::array<Rgb, 5> kDemoPalette = {
    Rgb{255, 25, 1}, Rgb{203, 77, 37}, Rgb{151, 129, 56}, Rgb{99, 181, 52}, Rgb{47, 233, 5}};

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 on success, 1 when an operation fails, 2 on usage
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// PGM-writable form of an operation result: U8 and U16 pass through,
/// anything else becomes U8 when every value lies in [0, 255] and U16
/// (saturated) otherwise.
Image to_writable(const Image& img);

}  // namespace visionkit::cli
