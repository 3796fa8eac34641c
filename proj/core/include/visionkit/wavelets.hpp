#pragma once

#include <span>

#include "visionkit/image.hpp"

namespace visionkit {

enum class WaveletKind { Haar, D4, D6, D8 };

/// Orthonormal analysis low-pass taps (2, 4, 6 or 8 of them).
std::span<const double> low_pass(WaveletKind kind) noexcept;

/// Quadrature mirror high-pass: g[k] = (-1)^k h[L-1-k].
std::vector<double> high_pass(WaveletKind kind);

/// One decomposition level over rows then columns with periodic extension.
/// The F64 result has the input's shape, laid out as [LL | HL ; LH | HH].
/// Throws OddDimensions, KindMismatch for non-F64 input.
Image wavelet_forward(const Image& img, WaveletKind kind);

/// Exact inverse of wavelet_forward.
Image wavelet_inverse(const Image& coeffs, WaveletKind kind);

}  // namespace visionkit
