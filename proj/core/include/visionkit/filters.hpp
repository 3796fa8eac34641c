#pragma once

#include <cstddef>
#include <vector>

#include "visionkit/image.hpp"
#include "visionkit/structuring_element.hpp"

namespace visionkit {

/// Dense F64 convolution kernel, anchored at its geometric center.
class Kernel {
 public:
  /// Throws EvenKernel for even dimensions, InvalidArgument for a size
  /// mismatch or non-finite entries.
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
  const std::vector<double>& values() const noexcept { return values_; }
  double sum() const noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// True 2D convolution (kernel flipped on both axes) with ExtendNearest
/// borders: out[p] = sum_j k[j] * img[p - (j - anchor)]. Output is F64.
Image& convolve(const Image& img, const Kernel& kernel, Image& out);
Image convolve(const Image& img, const Kernel& kernel);

/// Normalized 1D Gaussian taps for offsets -ceil(4 sigma) .. ceil(4 sigma).
std::vector<double> gaussian_kernel_1d(double sigma);

/// Separable Gaussian smoothing, F64 output. Throws NonPositiveSigma.
Image& gaussian_filter(const Image& img, double sigma, Image& out);
Image gaussian_filter(const Image& img, double sigma);

struct SobelResult {
  Image gx;         // F64, positive where intensity increases to the right
  Image gy;         // F64, positive where intensity increases downwards
  Image magnitude;  // F64, sqrt(gx^2 + gy^2)
};

/// Sobel gradients with kernels scaled by 1/8, ExtendNearest borders.
SobelResult sobel_gradients(const Image& img);

/// With `just_filter` the F64 gradient magnitude; otherwise a U8 edge map
/// holding 1 where the magnitude exceeds its mean.
Image sobel(const Image& img, bool just_filter = false);

/// Median over the structuring element's neighborhood (ExtendNearest).
/// Even neighborhood sizes take the lower median for integer kinds and the
/// midpoint of the two middle values for float kinds. U8 and U16 inputs use
/// a sliding histogram; other kinds sort.
Image& median_filter(const Image& img, const StructuringElement& se, Image& out);
Image median_filter(const Image& img, const StructuringElement& se = make_cross_3x3());

/// Disc of lattice offsets with dr^2 + dc^2 <= radius^2.
StructuringElement disc_se(int radius);

namespace detail {

void median_filter_sorting(const Image& img, const StructuringElement& se, Image& out);
void median_filter_histogram(const Image& img, const StructuringElement& se, Image& out);

}  // namespace detail

}  // namespace visionkit
