#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "visionkit/image.hpp"

namespace visionkit {

struct FeatureVector {
  std::string name;
  std::vector<double> values;
};

/// Pixel-pair displacement for cooccurrence counting.
enum class Direction { East, SouthEast, South, SouthWest };

inline constexpr std::array<Direction, 4> kAllDirections = {Direction::East, Direction::SouthEast,
                                                           Direction::South, Direction::SouthWest};

/// (row, col) displacement of a direction: E (0,1), SE (1,1), S (1,0), SW (1,-1).
std::array<int, 2> displacement(Direction d) noexcept;

/// Symmetrized, normalized gray-level cooccurrence matrix.
struct CooccurrenceMatrix {
  std::size_t levels = 0;  // max gray value + 1
  Direction direction = Direction::East;
  std::vector<double> p;   // levels x levels, sums to 1 (all zero if no pairs)
  std::size_t pair_count = 0;

  double operator()(std::size_t i, std::size_t j) const noexcept { return p[i * levels + j]; }
};

/// Counts every in-bounds pair (q, q + displacement), adds the transpose and
/// normalizes. Requires U8.
CooccurrenceMatrix cooccurrence(const Image& img, Direction direction);

inline constexpr std::size_t kHaralickFeatures = 13;

/// The 13 Haralick statistics of one normalized cooccurrence matrix, in the
/// order: angular second moment, contrast, correlation, sum of squares
/// (variance), inverse difference moment, sum average, sum variance, sum
/// entropy, entropy, difference variance, difference entropy, information
/// measures of correlation 1 and 2. Entropies use log2 with 0 log 0 = 0.
/// Correlation is 0 when a marginal variance is 0. A matrix without pairs
/// yields all zeros.
std::array<double, kHaralickFeatures> haralick_from_matrix(const CooccurrenceMatrix& m);

/// 4 x 13 values: the statistics for E, SE, S and SW, one block per
/// direction. Requires U8 with at least 2 pixels (DegenerateImage otherwise).
FeatureVector haralick(const Image& img);

/// Magnitudes |A_nm| for 0 <= n <= degree, 0 <= m <= n, n - m even, ordered
/// by n then m. Coordinates are centered on the intensity centroid and
/// divided by `radius`; only pixels with rho <= 1 contribute, and the
/// intensities are normalized by their in-disk sum.
FeatureVector zernike_moments(const Image& img, double radius, int degree);

/// Rotation-invariant uniform LBP histogram with points + 2 bins: bins
/// 0..points count uniform codes by popcount, the last bin collects
/// non-uniform codes. Samples are bilinear on a circle of `radius` with
/// nearest-pixel extension; a sample >= the center value sets its bit.
FeatureVector lbp(const Image& img, double radius, int points);

/// Per-pixel LBP code (bit k = sample k) exposed for testing.
std::vector<std::uint32_t> lbp_codes(const Image& img, double radius, int points);

/// Maps a points-bit code to its rotation-invariant uniform class.
std::size_t lbp_uniform_class(std::uint32_t code, int points) noexcept;

/// Threshold adjacency statistics (54 values). Foreground mean mu over the
/// nonzero pixels; masks [mu-30, mu+30], [mu-30, 255], [mu, 255]. For each
/// mask a 9-bin histogram of white pixels by number of white 8-neighbors
/// (out of bounds counts as black), normalized by the white count. The three
/// mask histograms come first, then those of the three complemented masks.
FeatureVector tas(const Image& img);

/// Parameter-free variant: the margin 30 becomes the standard deviation of
/// the nonzero pixels.
FeatureVector pftas(const Image& img);

/// The 9-bin neighbor-count histogram of one binary mask (nonzero = white).
std::array<double, 9> adjacency_histogram(const std::vector<std::uint8_t>& mask, Shape shape);

}  // namespace visionkit
