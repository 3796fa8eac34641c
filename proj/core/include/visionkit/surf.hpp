#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "visionkit/image.hpp"

namespace visionkit {

/// Summed-area table: entry (r, c) is the sum over rows < r and cols < c.
class IntegralImage {
 public:
  explicit IntegralImage(const Image& img, double scale = 1.0);

  std::size_t rows() const noexcept { return rows_; }  // of the source image
  std::size_t cols() const noexcept { return cols_; }
  double entry(std::size_t r, std::size_t c) const noexcept { return table_[r * (cols_ + 1) + c]; }

  /// Sum over rows [row, row + height) and cols [col, col + width), clipped
  /// to the image. Empty or fully outside boxes sum to 0.
  double box_sum(std::ptrdiff_t row, std::ptrdiff_t col, std::ptrdiff_t height,
                 std::ptrdiff_t width) const noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

IntegralImage integral_image(const Image& img);

inline constexpr std::size_t kSurfDescriptorSize = 64;
inline constexpr std::size_t kSurfMetaSize = 6;
inline constexpr std::size_t kSurfRowSize = kSurfMetaSize + kSurfDescriptorSize;

struct InterestPoint {
  double y = 0.0;      // row
  double x = 0.0;      // column
  double scale = 0.0;
  double score = 0.0;  // normalized Hessian determinant
  int laplacian_sign = 1;  // sign of Dxx + Dyy; bright blobs are -1
  double angle = 0.0;  // radians in [0, 2 pi)
  std::array<double, kSurfDescriptorSize> descriptor{};

  /// (y, x, scale, score, laplacian_sign, angle, descriptor...)
  std::array<double, kSurfRowSize> row() const;
};

struct SurfParams {
  double threshold = 0.0004;  // on responses normalized by filter area squared
  bool upright = false;       // skip orientation assignment
};

struct HessianResponse {
  double dxx = 0.0;
  double dyy = 0.0;
  double dxy = 0.0;
  double determinant = 0.0;  // dxx * dyy - (0.9 dxy)^2
};

/// Box-filter Hessian at (row, col) for a filter of side `filter_size`
/// (a multiple of 3), each derivative divided by the filter area.
HessianResponse hessian_at(const IntegralImage& ii, std::ptrdiff_t row, std::ptrdiff_t col,
                           int filter_size);

/// Filter side for (octave, layer): 3 * (2^(octave+1) * (layer+1) + 1),
/// giving 9, 15, 21, ... in the first octave.
int surf_filter_size(int octave, int layer) noexcept;

/// Factor applied to integer images before building the integral image:
/// U8 by 1/255, U16 by 1/65535, other kinds unscaled.
double surf_intensity_scale(ScalarKind kind) noexcept;

/// Scale-space maxima of the Hessian determinant, refined by 3D quadratic
/// interpolation, sorted by descending score. Angles and descriptors are
/// left empty.
std::vector<InterestPoint> surf_detect(const Image& img, int nr_octaves, int nr_scales, int initial_step,
                                       const SurfParams& params = {});

/// Fills orientation (unless upright) and the L2-normalized 64-value
/// descriptor for each point.
std::vector<InterestPoint> surf_descriptors(const Image& img, std::vector<InterestPoint> points,
                                            const SurfParams& params = {});

/// surf_descriptors(img, surf_detect(img, ...)).
std::vector<InterestPoint> surf(const Image& img, int nr_octaves, int nr_scales, int initial_step,
                                const SurfParams& params = {});

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Grayscale image replicated to three channels, with each point outlined by
/// an axis-aligned square of side 2 * scale in colors[cluster_ids[i] mod
/// colors.size()], clipped to the image.
RgbImage show_surf(const Image& img, std::span<const InterestPoint> points,
                   std::span<const int> cluster_ids, std::span<const Rgb> colors);

namespace detail {

/// Unrefined scale-space maximum, in grid coordinates.
struct ScaleSpaceMaximum {
  int octave;
  int layer;
  std::ptrdiff_t grid_row;
  std::ptrdiff_t grid_col;
  int step;
  double response;
};

std::vector<ScaleSpaceMaximum> surf_maxima(const IntegralImage& ii, int nr_octaves, int nr_scales,
                                           int initial_step, double threshold);

}  // namespace detail

}  // namespace visionkit
