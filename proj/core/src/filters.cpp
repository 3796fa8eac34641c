#include "visionkit/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace visionkit {
namespace {

// Contiguous F64 copy of any image.
std::vector<double> to_f64(const Image& img) {
  std::vector<double> buf(img.size());
  visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
    const auto v = img.view<T>();
    for (std::size_t r = 0; r < v.rows; ++r) {
      const T* row = v.row(r);
      double* dst = buf.data() + r * v.cols;
      for (std::size_t c = 0; c < v.cols; ++c) dst[c] = static_cast<double>(row[c]);
    }
  });
  return buf;
}

void require_input(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
}

// Correlates each row (axis 1) or column (axis 0) with `taps` centered on
// the middle tap, clamping at the borders. The taps sum to one, so the sum
// is formed over differences from the center sample; constant input then
// comes back unchanged to the last bit.
std::vector<double> correlate_1d(const std::vector<double>& src, Shape shape,
                                 const std::vector<double>& taps, int axis) {
  std::vector<double> dst(src.size());
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::size_t rows = shape.rows;
  const std::size_t cols = shape.cols;
  if (axis == 1) {
    for (std::size_t r = 0; r < rows; ++r) {
      const double* s = src.data() + r * cols;
      double* d = dst.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) {
        double acc = 0.0;
        for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
          acc += taps[static_cast<std::size_t>(t + radius)] *
                 (s[clamp_index(static_cast<std::ptrdiff_t>(c) + t, cols)] - s[c]);
        }
        d[c] = s[c] + acc;
      }
    }
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      double* d = dst.data() + r * cols;
      const double* mid = src.data() + r * cols;
      std::fill(d, d + cols, 0.0);
      for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
        const double w = taps[static_cast<std::size_t>(t + radius)];
        const double* s = src.data() + clamp_index(static_cast<std::ptrdiff_t>(r) + t, rows) * cols;
        for (std::size_t c = 0; c < cols; ++c) d[c] += w * (s[c] - mid[c]);
      }
      for (std::size_t c = 0; c < cols; ++c) d[c] += mid[c];
    }
  }
  return dst;
}

void write_f64(const std::vector<double>& buf, Image& out) {
  auto v = out.view<double>();
  std::copy(buf.begin(), buf.end(), v.data);
}

}  // namespace

Kernel::Kernel(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols || rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "kernel: " + std::to_string(values_.size()) +
                                                " values do not fill a " + std::to_string(rows) + "x" +
                                                std::to_string(cols) + " kernel");
  }
  if (rows % 2 == 0 || cols % 2 == 0) {
    throw Error(ErrorCode::EvenKernel, "kernel: dimensions must be odd, got " + std::to_string(rows) +
                                           "x" + std::to_string(cols));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "kernel: values must be finite");
  }
}

double Kernel::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Image& convolve(const Image& img, const Kernel& kernel, Image& out) {
  require_input(img);
  validate_out(out, img.shape(), ScalarKind::F64);
  const std::vector<double> src = to_f64(img);
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  const auto ar = static_cast<std::ptrdiff_t>(kernel.rows() / 2);
  const auto ac = static_cast<std::ptrdiff_t>(kernel.cols() / 2);
  std::vector<double> dst(src.size(), 0.0);
  std::vector<std::size_t> col_index(cols);
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    for (std::size_t j = 0; j < kernel.cols(); ++j) {
      const double w = kernel(i, j);
      if (w == 0.0) continue;
      const std::ptrdiff_t dr = static_cast<std::ptrdiff_t>(i) - ar;
      const std::ptrdiff_t dc = static_cast<std::ptrdiff_t>(j) - ac;
      for (std::size_t c = 0; c < cols; ++c) {
        col_index[c] = clamp_index(static_cast<std::ptrdiff_t>(c) - dc, cols);
      }
      for (std::size_t r = 0; r < rows; ++r) {
        const double* s = src.data() + clamp_index(static_cast<std::ptrdiff_t>(r) - dr, rows) * cols;
        double* d = dst.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) d[c] += w * s[col_index[c]];
      }
    }
  }
  write_f64(dst, out);
  return out;
}

Image convolve(const Image& img, const Kernel& kernel) {
  require_input(img);
  Image out(img.shape(), ScalarKind::F64);
  return convolve(img, kernel, out);
}

std::vector<double> gaussian_kernel_1d(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma: must be a finite value > 0, got " + std::to_string(sigma));
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  for (std::ptrdiff_t t = -radius; t <= radius; ++t) {
    const auto x = static_cast<double>(t);
    taps[static_cast<std::size_t>(t + radius)] = std::exp(-x * x / (2.0 * sigma * sigma));
  }
  const double total = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= total;
  return taps;
}

Image& gaussian_filter(const Image& img, double sigma, Image& out) {
  require_input(img);
  const std::vector<double> taps = gaussian_kernel_1d(sigma);
  validate_out(out, img.shape(), ScalarKind::F64);
  const auto along_rows = correlate_1d(to_f64(img), img.shape(), taps, 1);
  write_f64(correlate_1d(along_rows, img.shape(), taps, 0), out);
  return out;
}

Image gaussian_filter(const Image& img, double sigma) {
  require_input(img);
  Image out(img.shape(), ScalarKind::F64);
  return gaussian_filter(img, sigma, out);
}

namespace {

// Calls emit(r, gx, gy) with the gradient rows of `img`, keeping only three
// padded source rows in memory.
template <class Emit>
void sobel_sweep(const Image& img, Emit&& emit) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
    const auto v = img.view<T>();
    std::array<std::vector<double>, 3> ring;
    for (auto& b : ring) b.resize(cols + 2);
    auto load = [&](std::size_t r, std::vector<double>& dst) {
      const T* src = v.row(r);
      for (std::size_t c = 0; c < cols; ++c) dst[c + 1] = static_cast<double>(src[c]);
      dst[0] = dst[1];
      dst[cols + 1] = dst[cols];
    };
    std::vector<double> gx(cols), gy(cols);
    double* up = ring[0].data();
    double* mid = ring[1].data();
    double* down = ring[2].data();
    load(0, ring[0]);
    load(0, ring[1]);
    load(rows > 1 ? 1 : 0, ring[2]);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t l = c, m = c + 1, rt = c + 2;
        gx[c] = ((up[rt] - up[l]) + 2.0 * (mid[rt] - mid[l]) + (down[rt] - down[l])) / 8.0;
        gy[c] = ((down[l] - up[l]) + 2.0 * (down[m] - up[m]) + (down[rt] - up[rt])) / 8.0;
      }
      emit(r, gx.data(), gy.data());
      if (r + 1 == rows) break;
      // Rotate: the old top row becomes the new bottom.
      double* spare = up;
      up = mid;
      mid = down;
      down = spare;
      const std::size_t next = std::min(r + 2, rows - 1);
      for (auto& b : ring) {
        if (b.data() == down) load(next, b);
      }
    }
  });
}

}  // namespace

SobelResult sobel_gradients(const Image& img) {
  require_input(img);
  SobelResult result{Image(img.shape(), ScalarKind::F64), Image(img.shape(), ScalarKind::F64),
                     Image(img.shape(), ScalarKind::F64)};
  auto gx = result.gx.view<double>();
  auto gy = result.gy.view<double>();
  auto mag = result.magnitude.view<double>();
  sobel_sweep(img, [&](std::size_t r, const double* x, const double* y) {
    double* ox = gx.row(r);
    double* oy = gy.row(r);
    double* om = mag.row(r);
    for (std::size_t c = 0; c < gx.cols; ++c) {
      ox[c] = x[c];
      oy[c] = y[c];
      om[c] = std::sqrt(x[c] * x[c] + y[c] * y[c]);
    }
  });
  return result;
}

Image sobel(const Image& img, bool just_filter) {
  require_input(img);
  Image magnitude(img.shape(), ScalarKind::F64);
  auto mag = magnitude.view<double>();
  sobel_sweep(img, [&](std::size_t r, const double* x, const double* y) {
    double* om = mag.row(r);
    for (std::size_t c = 0; c < mag.cols; ++c) om[c] = std::sqrt(x[c] * x[c] + y[c] * y[c]);
  });
  if (just_filter) return magnitude;
  const std::size_t n = mag.rows * mag.cols;
  const double mean = std::accumulate(mag.data, mag.data + n, 0.0) / static_cast<double>(n);
  Image edges(img.shape(), ScalarKind::U8);
  auto e = edges.view<std::uint8_t>();
  for (std::size_t i = 0; i < n; ++i) e.data[i] = mag.data[i] > mean ? 1 : 0;
  return edges;
}

StructuringElement disc_se(int radius) {
  if (radius < 1) {
    throw Error(ErrorCode::InvalidArgument, "radius: must be >= 1, got " + std::to_string(radius));
  }
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  std::vector<bool> mask(side * side);
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      mask[static_cast<std::size_t>(dr + radius) * side + static_cast<std::size_t>(dc + radius)] =
          dr * dr + dc * dc <= radius * radius;
    }
  }
  return StructuringElement(side, side, std::move(mask));
}

// ---------------------------------------------------------------------------
// Median filtering

namespace {

void check_median_args(const Image& img, const Image& out) {
  require_input(img);
  validate_out(out, img.shape(), img.kind());
}

template <Scalar T>
void median_sorting_kernel(ImageView<const T> in, const StructuringElement& se, ImageView<T> out) {
  NeighborhoodCursor<T> cursor(in, se);
  const std::size_t n = cursor.size();
  const std::size_t k = (n - 1) / 2;
  std::vector<T> values(n);
  for (; !cursor.done(); cursor.advance()) {
    for (std::size_t j = 0; j < n; ++j) values[j] = cursor[j];
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    T median = values[k];
    if constexpr (std::is_floating_point_v<T>) {
      if (n % 2 == 0) {
        const T upper = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(k) + 1, values.end());
        median = static_cast<T>((static_cast<double>(median) + static_cast<double>(upper)) / 2.0);
      }
    }
    out(cursor.row(), cursor.col()) = median;
  }
}

// Two-level counting histogram: `Fine` low bits per coarse bin.
template <int Bits, int FineBits>
class TwoLevelHistogram {
 public:
  static constexpr std::size_t kBins = std::size_t{1} << Bits;
  static constexpr std::size_t kFine = std::size_t{1} << FineBits;
  static constexpr std::size_t kCoarse = kBins / kFine;

  void clear() {
    fine_.fill(0);
    coarse_.fill(0);
  }
  void add(std::size_t v) {
    ++fine_[v];
    ++coarse_[v >> FineBits];
  }
  void remove(std::size_t v) {
    --fine_[v];
    --coarse_[v >> FineBits];
  }
  /// Value with zero-based rank k.
  std::size_t select(std::size_t k) const {
    std::size_t seen = 0;
    std::size_t block = 0;
    while (seen + coarse_[block] <= k) seen += coarse_[block++];
    std::size_t v = block << FineBits;
    while (seen + fine_[v] <= k) seen += fine_[v++];
    return v;
  }

 private:
  std::array<std::uint32_t, kBins> fine_{};
  std::array<std::uint32_t, kCoarse> coarse_{};
};

template <Scalar T, class Histogram>
void median_histogram_kernel(ImageView<const T> in, const StructuringElement& se, ImageView<T> out,
                             Histogram& hist) {
  const auto& cells = se.cells();
  std::vector<Offset> leaving;
  std::vector<Offset> entering;
  auto has = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    const auto center = se.center();
    const std::ptrdiff_t mr = r + center.row;
    const std::ptrdiff_t mc = c + center.col;
    return mr >= 0 && mc >= 0 && mr < static_cast<std::ptrdiff_t>(se.rows()) &&
           mc < static_cast<std::ptrdiff_t>(se.cols()) &&
           se.contains(static_cast<std::size_t>(mr), static_cast<std::size_t>(mc));
  };
  for (const auto& cell : cells) {
    if (!has(cell.offset.row, cell.offset.col - 1)) leaving.push_back(cell.offset);
    if (!has(cell.offset.row, cell.offset.col + 1)) entering.push_back(cell.offset);
  }
  const std::size_t k = (cells.size() - 1) / 2;
  const auto shape = in.shape();
  auto value_at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    const Position p = resolve(BorderMode::ExtendNearest, r, c, shape);
    return static_cast<std::size_t>(in(p.row, p.col));
  };
  for (std::size_t r = 0; r < in.rows; ++r) {
    const auto rr = static_cast<std::ptrdiff_t>(r);
    hist.clear();
    for (const auto& cell : cells) hist.add(value_at(rr + cell.offset.row, cell.offset.col));
    out(r, 0) = static_cast<T>(hist.select(k));
    for (std::size_t c = 1; c < in.cols; ++c) {
      const auto cc = static_cast<std::ptrdiff_t>(c);
      for (const auto& o : leaving) hist.remove(value_at(rr + o.row, cc - 1 + o.col));
      for (const auto& o : entering) hist.add(value_at(rr + o.row, cc + o.col));
      out(r, c) = static_cast<T>(hist.select(k));
    }
  }
}

template <class Kernel>
void median_with_alias_guard(const Image& img, Image& out, Kernel&& kernel) {
  if (out.shares_storage(img)) {
    Image tmp(img.shape(), img.kind());
    kernel(tmp);
    visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
      const auto s = tmp.view<T>();
      std::copy(s.data, s.data + s.rows * s.cols, out.view<T>().data);
    });
  } else {
    kernel(out);
  }
}

}  // namespace

namespace detail {

void median_filter_sorting(const Image& img, const StructuringElement& se, Image& out) {
  check_median_args(img, out);
  median_with_alias_guard(img, out, [&](Image& dst) {
    visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
      median_sorting_kernel<T>(img.view<T>(), se, dst.view<T>());
    });
  });
}

void median_filter_histogram(const Image& img, const StructuringElement& se, Image& out) {
  check_median_args(img, out);
  median_with_alias_guard(img, out, [&](Image& dst) {
    if (img.kind() == ScalarKind::U8) {
      auto hist = std::make_unique<TwoLevelHistogram<8, 4>>();
      median_histogram_kernel<std::uint8_t>(img.view<std::uint8_t>(), se, dst.view<std::uint8_t>(), *hist);
    } else if (img.kind() == ScalarKind::U16) {
      auto hist = std::make_unique<TwoLevelHistogram<16, 8>>();
      median_histogram_kernel<std::uint16_t>(img.view<std::uint16_t>(), se, dst.view<std::uint16_t>(),
                                             *hist);
    } else {
      throw Error(ErrorCode::KindMismatch, "img: histogram median needs U8 or U16, got " +
                                               std::string(to_string(img.kind())));
    }
  });
}

}  // namespace detail

Image& median_filter(const Image& img, const StructuringElement& se, Image& out) {
  require_input(img);
  if (img.kind() == ScalarKind::U8 || img.kind() == ScalarKind::U16) {
    detail::median_filter_histogram(img, se, out);
  } else {
    detail::median_filter_sorting(img, se, out);
  }
  return out;
}

Image median_filter(const Image& img, const StructuringElement& se) {
  require_input(img);
  Image out(img.shape(), img.kind());
  return median_filter(img, se, out);
}

}  // namespace visionkit
