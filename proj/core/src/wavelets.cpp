#include "visionkit/wavelets.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace visionkit {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

constexpr std::array<double, 2> kHaar = {0.7071067811865476, 0.7071067811865476};
constexpr std::array<double, 4> kD4 = {0.4829629131445341, 0.8365163037378079, 0.2241438680420134,
                                       -0.1294095225512604};
constexpr std::array<double, 6> kD6 = {0.3326705529500826,  0.8068915093110925,  0.4598775021184915,
                                       -0.1350110200102546, -0.0854412738820267, 0.0352262918857095};
constexpr std::array<double, 8> kD8 = {0.2303778133088965,  0.7148465705529156,  0.6308807679298589,
                                       -0.0279837694168599, -0.1870348117190930, 0.0308413818355607,
                                       0.0328830116668852,  -0.0105974017850690};

template <std::size_t N>
constexpr bool orthonormal_low_pass(const std::array<double, N>& h) {
  double sum = 0.0, energy = 0.0;
  for (double v : h) {
    sum += v;
    energy += v * v;
  }
  const double ds = sum - kSqrt2;
  const double de = energy - 1.0;
  return ds < 1e-12 && ds > -1e-12 && de < 1e-12 && de > -1e-12;
}

static_assert(orthonormal_low_pass(kHaar));
static_assert(orthonormal_low_pass(kD4));
static_assert(orthonormal_low_pass(kD6));
static_assert(orthonormal_low_pass(kD8));

void require_even_f64(const Image& img, const char* argument) {
  img.require_kind(ScalarKind::F64, argument);
  if (img.rows() % 2 != 0 || img.cols() % 2 != 0) {
    throw Error(ErrorCode::OddDimensions,
                std::string(argument) + ": both dimensions must be even, got " + to_string(img.shape()));
  }
}

// Periodic analysis of n samples at `stride`: approximations to the first
// half, details to the second half.
void analyze(const double* in, double* out, std::size_t n, std::size_t stride,
             std::span<const double> h, const std::vector<double>& g, std::vector<double>& scratch) {
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double x = in[((2 * i + k) % n) * stride];
      a += h[k] * x;
      d += g[k] * x;
    }
    scratch[i] = a;
    scratch[half + i] = d;
  }
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = scratch[i];
}

void synthesize(const double* in, double* out, std::size_t n, std::size_t stride,
                std::span<const double> h, const std::vector<double>& g, std::vector<double>& scratch) {
  const std::size_t half = n / 2;
  std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    const double a = in[i * stride];
    const double d = in[(half + i) * stride];
    for (std::size_t k = 0; k < h.size(); ++k) scratch[(2 * i + k) % n] += h[k] * a + g[k] * d;
  }
  for (std::size_t i = 0; i < n; ++i) out[i * stride] = scratch[i];
}

}  // namespace

std::span<const double> low_pass(WaveletKind kind) noexcept {
  switch (kind) {
    case WaveletKind::Haar: return kHaar;
    case WaveletKind::D4: return kD4;
    case WaveletKind::D6: return kD6;
    case WaveletKind::D8: return kD8;
  }
  return kHaar;
}

std::vector<double> high_pass(WaveletKind kind) {
  const auto h = low_pass(kind);
  const std::size_t n = h.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[n - 1 - k];
  return g;
}

Image wavelet_forward(const Image& img, WaveletKind kind) {
  require_even_f64(img, "img");
  Image out = img.clone();
  auto v = out.view<double>();
  const auto h = low_pass(kind);
  const auto g = high_pass(kind);
  std::vector<double> scratch(std::max(v.rows, v.cols));
  for (std::size_t r = 0; r < v.rows; ++r) analyze(v.row(r), v.row(r), v.cols, 1, h, g, scratch);
  for (std::size_t c = 0; c < v.cols; ++c) analyze(v.data + c, v.data + c, v.rows, v.stride, h, g, scratch);
  return out;
}

Image wavelet_inverse(const Image& coeffs, WaveletKind kind) {
  require_even_f64(coeffs, "coeffs");
  Image out = coeffs.clone();
  auto v = out.view<double>();
  const auto h = low_pass(kind);
  const auto g = high_pass(kind);
  std::vector<double> scratch(std::max(v.rows, v.cols));
  for (std::size_t c = 0; c < v.cols; ++c) synthesize(v.data + c, v.data + c, v.rows, v.stride, h, g, scratch);
  for (std::size_t r = 0; r < v.rows; ++r) synthesize(v.row(r), v.row(r), v.cols, 1, h, g, scratch);
  return out;
}

}  // namespace visionkit
