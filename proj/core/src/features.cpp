#include "visionkit/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "visionkit/structuring_element.hpp"

namespace visionkit {

std::array<int, 2> displacement(Direction d) noexcept {
  switch (d) {
    case Direction::East: return {0, 1};
    case Direction::SouthEast: return {1, 1};
    case Direction::South: return {1, 0};
    case Direction::SouthWest: return {1, -1};
  }
  return {0, 1};
}

CooccurrenceMatrix cooccurrence(const Image& img, Direction direction) {
  img.require_kind(ScalarKind::U8, "img");
  const auto v = img.view<std::uint8_t>();
  std::uint8_t top = 0;
  for (std::size_t r = 0; r < v.rows; ++r) {
    top = std::max(top, *std::max_element(v.row(r), v.row(r) + v.cols));
  }
  CooccurrenceMatrix m;
  m.levels = std::size_t{top} + 1;
  m.direction = direction;
  std::vector<std::uint64_t> counts(m.levels * m.levels, 0);
  const auto [dr, dc] = displacement(direction);
  const auto rows = static_cast<std::ptrdiff_t>(v.rows);
  const auto cols = static_cast<std::ptrdiff_t>(v.cols);
  for (std::ptrdiff_t r = 0; r + dr < rows; ++r) {
    const std::uint8_t* a = v.row(static_cast<std::size_t>(r));
    const std::uint8_t* b = v.row(static_cast<std::size_t>(r + dr));
    const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, -dc);
    const std::ptrdiff_t c1 = std::min(cols, cols - dc);
    for (std::ptrdiff_t c = c0; c < c1; ++c) {
      ++counts[std::size_t{a[c]} * m.levels + b[c + dc]];
      ++m.pair_count;
    }
  }
  m.p.assign(counts.size(), 0.0);
  if (m.pair_count == 0) return m;
  const double total = 2.0 * static_cast<double>(m.pair_count);
  for (std::size_t i = 0; i < m.levels; ++i) {
    for (std::size_t j = 0; j < m.levels; ++j) {
      m.p[i * m.levels + j] =
          static_cast<double>(counts[i * m.levels + j] + counts[j * m.levels + i]) / total;
    }
  }
  return m;
}

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

std::array<double, kHaralickFeatures> haralick_from_matrix(const CooccurrenceMatrix& m) {
  std::array<double, kHaralickFeatures> f{};
  if (m.pair_count == 0) return f;
  const std::size_t g = m.levels;
  std::vector<double> px(g, 0.0), py(g, 0.0), psum(2 * g - 1, 0.0), pdiff(g, 0.0);
  double asm_ = 0.0, idm = 0.0, entropy = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double p = m(i, j);
      if (p == 0.0) continue;
      px[i] += p;
      py[j] += p;
      psum[i + j] += p;
      const std::size_t d = i > j ? i - j : j - i;
      pdiff[d] += p;
      asm_ += p * p;
      idm += p / (1.0 + static_cast<double>(d * d));
      entropy -= plogp(p);
      cross += static_cast<double>(i) * static_cast<double>(j) * p;
    }
  }
  double ux = 0.0, uy = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    ux += static_cast<double>(k) * px[k];
    uy += static_cast<double>(k) * py[k];
  }
  double vx = 0.0, vy = 0.0, hx = 0.0, hy = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const double dx = static_cast<double>(k) - ux;
    const double dy = static_cast<double>(k) - uy;
    vx += dx * dx * px[k];
    vy += dy * dy * py[k];
    hx -= plogp(px[k]);
    hy -= plogp(py[k]);
  }
  double contrast = 0.0, diff_mean = 0.0, diff_entropy = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const auto kk = static_cast<double>(k);
    contrast += kk * kk * pdiff[k];
    diff_mean += kk * pdiff[k];
    diff_entropy -= plogp(pdiff[k]);
  }
  double diff_var = 0.0;
  for (std::size_t k = 0; k < g; ++k) {
    const double d = static_cast<double>(k) - diff_mean;
    diff_var += d * d * pdiff[k];
  }
  double sum_avg = 0.0, sum_entropy = 0.0;
  for (std::size_t k = 0; k < psum.size(); ++k) {
    sum_avg += static_cast<double>(k) * psum[k];
    sum_entropy -= plogp(psum[k]);
  }
  double sum_var = 0.0;
  for (std::size_t k = 0; k < psum.size(); ++k) {
    const double d = static_cast<double>(k) - sum_avg;
    sum_var += d * d * psum[k];
  }
  double hxy1 = 0.0, hxy2 = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    if (px[i] == 0.0) continue;
    for (std::size_t j = 0; j < g; ++j) {
      if (py[j] == 0.0) continue;
      const double q = px[i] * py[j];
      const double lq = std::log2(q);
      hxy1 -= m(i, j) * lq;
      hxy2 -= q * lq;
    }
  }

  f[0] = asm_;
  f[1] = contrast;
  f[2] = (vx > 0.0 && vy > 0.0) ? (cross - ux * uy) / std::sqrt(vx * vy) : 0.0;
  f[3] = vx;
  f[4] = idm;
  f[5] = sum_avg;
  f[6] = sum_var;
  f[7] = sum_entropy;
  f[8] = entropy;
  f[9] = diff_var;
  f[10] = diff_entropy;
  const double hmax = std::max(hx, hy);
  f[11] = hmax > 0.0 ? (entropy - hxy1) / hmax : 0.0;
  f[12] = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - entropy))));
  return f;
}

FeatureVector haralick(const Image& img) {
  img.require_kind(ScalarKind::U8, "img");
  if (img.size() < 2) {
    throw Error(ErrorCode::DegenerateImage, "img: Haralick features need at least 2 pixels, got " +
                                                to_string(img.shape()));
  }
  FeatureVector out{"haralick", {}};
  out.values.reserve(4 * kHaralickFeatures);
  for (Direction d : kAllDirections) {
    const auto f = haralick_from_matrix(cooccurrence(img, d));
    out.values.insert(out.values.end(), f.begin(), f.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

FeatureVector zernike_moments(const Image& img, double radius, int degree) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radius: must be > 0, got " + std::to_string(radius));
  }
  if (degree < 0) {
    throw Error(ErrorCode::InvalidArgument, "degree: must be >= 0, got " + std::to_string(degree));
  }
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  std::vector<double> f(img.size());
  double total = 0.0, sr = 0.0, sc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = img.value(r, c);
      f[r * cols + c] = v;
      total += v;
      sr += static_cast<double>(r) * v;
      sc += static_cast<double>(c) * v;
    }
  }
  if (total == 0.0) throw Error(ErrorCode::ZeroImage, "img: pixel sum is zero");
  const double cy = sr / total;
  const double cx = sc / total;

  const auto n_max = static_cast<std::size_t>(degree);
  // radial[n][m] for m <= n, plus one spare column so m + 1 lookups read 0.
  std::vector<std::vector<double>> radial(n_max + 1, std::vector<double>(n_max + 2, 0.0));
  std::vector<std::complex<double>> phase(n_max + 1);
  std::vector<std::complex<double>> acc((n_max + 1) * (n_max + 1));
  double disk_sum = 0.0;
  std::size_t disk_count = 0;

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = (static_cast<double>(c) - cx) / radius;
      const double y = (static_cast<double>(r) - cy) / radius;
      const double rho2 = x * x + y * y;
      if (rho2 > 1.0) continue;
      ++disk_count;
      const double v = f[r * cols + c];
      disk_sum += v;
      if (v == 0.0) continue;
      const double rho = std::sqrt(rho2);

      // R_n^m = rho (R_{n-1}^{|m-1|} + R_{n-1}^{m+1}) - R_{n-2}^m
      radial[0][0] = 1.0;
      for (std::size_t n = 1; n <= n_max; ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
          const double left = radial[n - 1][m == 0 ? 1 : m - 1];
          const double right = m + 1 <= n - 1 ? radial[n - 1][m + 1] : 0.0;
          const double below = (n >= 2 && m <= n - 2) ? radial[n - 2][m] : 0.0;
          radial[n][m] = rho * (left + right) - below;
        }
      }
      // e^{-i m theta} by repeated multiplication with (x - iy) / rho.
      const std::complex<double> unit = rho > 0.0 ? std::complex<double>(x / rho, -y / rho) : 1.0;
      phase[0] = 1.0;
      for (std::size_t m = 1; m <= n_max; ++m) phase[m] = phase[m - 1] * unit;

      for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t m = n % 2; m <= n; m += 2) acc[n * (n_max + 1) + m] += v * radial[n][m] * phase[m];
      }
    }
  }
  if (disk_count == 0) {
    throw Error(ErrorCode::EmptyDisk, "radius: no pixel falls inside the unit disk of radius " +
                                          std::to_string(radius));
  }
  if (disk_sum == 0.0) throw Error(ErrorCode::ZeroImage, "img: pixel sum inside the disk is zero");

  FeatureVector out{"zernike", {}};
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = n % 2; m <= n; m += 2) {
      const double scale = (static_cast<double>(n) + 1.0) / std::numbers::pi / disk_sum;
      out.values.push_back(std::abs(acc[n * (n_max + 1) + m]) * scale);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SampleOffset {
  double dr;
  double dc;
};

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

// Offsets (-R sin t, R cos t) for t = 2 pi k / P. When P is a multiple of 4
// the first quarter is computed and rotated exactly by 90 degree steps.
std::vector<SampleOffset> circle_offsets(double radius, int points) {
  const auto n = static_cast<std::size_t>(points);
  std::vector<SampleOffset> offsets(n);
  const std::size_t direct = points % 4 == 0 ? n / 4 : n;
  for (std::size_t k = 0; k < direct; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    offsets[k] = {snap(-radius * std::sin(t)), snap(radius * std::cos(t))};
  }
  for (std::size_t k = direct; k < n; ++k) {
    const auto& prev = offsets[k - direct];
    offsets[k] = {-prev.dc == 0.0 ? 0.0 : -prev.dc, prev.dr};
  }
  return offsets;
}

double bilinear(const std::vector<double>& f, Shape shape, double y, double x) {
  const double y0 = std::floor(y);
  const double x0 = std::floor(x);
  const double fy = y - y0;
  const double fx = x - x0;
  const auto r0 = static_cast<std::ptrdiff_t>(y0);
  const auto c0 = static_cast<std::ptrdiff_t>(x0);
  auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    return f[clamp_index(r, shape.rows) * shape.cols + clamp_index(c, shape.cols)];
  };
  const double a = at(r0, c0);
  if (fx == 0.0 && fy == 0.0) return a;
  const double b = at(r0, c0 + 1);
  const double c = at(r0 + 1, c0);
  const double d = at(r0 + 1, c0 + 1);
  const double top = a + fx * (b - a);
  const double bottom = c + fx * (d - c);
  return top + fy * (bottom - top);
}

}  // namespace

std::size_t lbp_uniform_class(std::uint32_t code, int points) noexcept {
  const auto p = static_cast<unsigned>(points);
  const std::uint32_t mask = p >= 32 ? 0xffffffffu : ((1u << p) - 1u);
  code &= mask;
  const std::uint32_t rotated = ((code << 1) | (code >> (p - 1))) & mask;
  const int transitions = std::popcount(code ^ rotated);
  if (transitions <= 2) return static_cast<std::size_t>(std::popcount(code));
  return p + 1;
}

std::vector<std::uint32_t> lbp_codes(const Image& img, double radius, int points) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  if (points < 4 || points > 32) {
    throw Error(ErrorCode::InvalidArgument, "points: must be in [4, 32], got " + std::to_string(points));
  }
  if (!(radius >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "radius: must be >= 1, got " + std::to_string(radius));
  }
  const Shape shape = img.shape();
  std::vector<double> f(img.size());
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) f[r * shape.cols + c] = img.value(r, c);
  }
  const auto offsets = circle_offsets(radius, points);
  std::vector<std::uint32_t> codes(img.size());
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double center = f[r * shape.cols + c];
      std::uint32_t code = 0;
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const double s = bilinear(f, shape, static_cast<double>(r) + offsets[k].dr,
                                  static_cast<double>(c) + offsets[k].dc);
        if (s >= center) code |= 1u << k;
      }
      codes[r * shape.cols + c] = code;
    }
  }
  return codes;
}

FeatureVector lbp(const Image& img, double radius, int points) {
  const auto codes = lbp_codes(img, radius, points);
  FeatureVector out{"lbp", std::vector<double>(static_cast<std::size_t>(points) + 2, 0.0)};
  for (std::uint32_t code : codes) out.values[lbp_uniform_class(code, points)] += 1.0;
  for (double& v : out.values) v /= static_cast<double>(codes.size());
  return out;
}

// ---------------------------------------------------------------------------

std::array<double, 9> adjacency_histogram(const std::vector<std::uint8_t>& mask, Shape shape) {
  std::array<double, 9> hist{};
  double white = 0.0;
  const auto rows = static_cast<std::ptrdiff_t>(shape.rows);
  const auto cols = static_cast<std::ptrdiff_t>(shape.cols);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      if (!mask[static_cast<std::size_t>(r * cols + c)]) continue;
      int neighbors = 0;
      for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const std::ptrdiff_t nr = r + dr;
          const std::ptrdiff_t nc = c + dc;
          if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
          neighbors += mask[static_cast<std::size_t>(nr * cols + nc)] ? 1 : 0;
        }
      }
      hist[static_cast<std::size_t>(neighbors)] += 1.0;
      white += 1.0;
    }
  }
  if (white > 0.0) {
    for (double& h : hist) h /= white;
  }
  return hist;
}

namespace {

struct ForegroundStats {
  double mean;
  double stddev;
};

ForegroundStats foreground_stats(const Image& img) {
  img.require_kind(ScalarKind::U8, "img");
  const auto v = img.view<std::uint8_t>();
  double n = 0.0, sum = 0.0, sum2 = 0.0;
  for (std::size_t r = 0; r < v.rows; ++r) {
    for (std::size_t c = 0; c < v.cols; ++c) {
      const double x = v(r, c);
      if (x == 0.0) continue;
      n += 1.0;
      sum += x;
      sum2 += x * x;
    }
  }
  if (n == 0.0) throw Error(ErrorCode::NoForeground, "img: no nonzero pixel to threshold");
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean))};
}

FeatureVector threshold_adjacency(const Image& img, double mean, double margin, std::string name) {
  const auto v = img.view<std::uint8_t>();
  const Shape shape = img.shape();
  const std::array<std::array<double, 2>, 3> ranges = {{
      {mean - margin, mean + margin},
      {mean - margin, 255.0},
      {mean, 255.0},
  }};
  FeatureVector out{std::move(name), {}};
  out.values.reserve(54);
  std::array<std::vector<std::uint8_t>, 3> masks;
  for (std::size_t i = 0; i < 3; ++i) {
    masks[i].resize(img.size());
    for (std::size_t r = 0; r < shape.rows; ++r) {
      for (std::size_t c = 0; c < shape.cols; ++c) {
        const double x = v(r, c);
        masks[i][r * shape.cols + c] = (x >= ranges[i][0] && x <= ranges[i][1]) ? 1 : 0;
      }
    }
    const auto h = adjacency_histogram(masks[i], shape);
    out.values.insert(out.values.end(), h.begin(), h.end());
  }
  for (auto& mask : masks) {
    for (auto& m : mask) m = m ? 0 : 1;
    const auto h = adjacency_histogram(mask, shape);
    out.values.insert(out.values.end(), h.begin(), h.end());
  }
  return out;
}

}  // namespace

FeatureVector tas(const Image& img) {
  const auto stats = foreground_stats(img);
  return threshold_adjacency(img, stats.mean, 30.0, "tas");
}

FeatureVector pftas(const Image& img) {
  const auto stats = foreground_stats(img);
  return threshold_adjacency(img, stats.mean, stats.stddev, "pftas");
}

}  // namespace visionkit
