#include "visionkit/surf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace visionkit {

IntegralImage::IntegralImage(const Image& img, double scale)
    : rows_(img.rows()), cols_(img.cols()), table_((img.rows() + 1) * (img.cols() + 1), 0.0) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  const std::size_t w = cols_ + 1;
  visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
    const auto v = img.view<T>();
    for (std::size_t r = 0; r < rows_; ++r) {
      const T* src = v.row(r);
      double running = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) {
        running += static_cast<double>(src[c]) * scale;
        table_[(r + 1) * w + c + 1] = table_[r * w + c + 1] + running;
      }
    }
  });
}

double IntegralImage::box_sum(std::ptrdiff_t row, std::ptrdiff_t col, std::ptrdiff_t height,
                              std::ptrdiff_t width) const noexcept {
  const auto rows = static_cast<std::ptrdiff_t>(rows_);
  const auto cols = static_cast<std::ptrdiff_t>(cols_);
  const std::ptrdiff_t r0 = std::clamp<std::ptrdiff_t>(row, 0, rows);
  const std::ptrdiff_t c0 = std::clamp<std::ptrdiff_t>(col, 0, cols);
  const std::ptrdiff_t r1 = std::clamp<std::ptrdiff_t>(row + height, 0, rows);
  const std::ptrdiff_t c1 = std::clamp<std::ptrdiff_t>(col + width, 0, cols);
  if (r1 <= r0 || c1 <= c0) return 0.0;
  auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    return entry(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  return at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
}

IntegralImage integral_image(const Image& img) { return IntegralImage(img); }

std::array<double, kSurfRowSize> InterestPoint::row() const {
  std::array<double, kSurfRowSize> out{};
  out[0] = y;
  out[1] = x;
  out[2] = scale;
  out[3] = score;
  out[4] = laplacian_sign;
  out[5] = angle;
  std::copy(descriptor.begin(), descriptor.end(), out.begin() + kSurfMetaSize);
  return out;
}

HessianResponse hessian_at(const IntegralImage& ii, std::ptrdiff_t r, std::ptrdiff_t c, int filter_size) {
  const std::ptrdiff_t size = filter_size;
  const std::ptrdiff_t b = (size - 1) / 2;
  const std::ptrdiff_t l = size / 3;
  const double inv_area = 1.0 / static_cast<double>(size * size);
  HessianResponse h;
  h.dxx = (ii.box_sum(r - l + 1, c - b, 2 * l - 1, size) - 3.0 * ii.box_sum(r - l + 1, c - l / 2, 2 * l - 1, l)) *
          inv_area;
  h.dyy = (ii.box_sum(r - b, c - l + 1, size, 2 * l - 1) - 3.0 * ii.box_sum(r - l / 2, c - l + 1, l, 2 * l - 1)) *
          inv_area;
  h.dxy = (ii.box_sum(r - l, c + 1, l, l) + ii.box_sum(r + 1, c - l, l, l) - ii.box_sum(r - l, c - l, l, l) -
           ii.box_sum(r + 1, c + 1, l, l)) *
          inv_area;
  h.determinant = h.dxx * h.dyy - 0.81 * h.dxy * h.dxy;
  return h;
}

int surf_filter_size(int octave, int layer) noexcept { return 3 * ((2 << octave) * (layer + 1) + 1); }

double surf_intensity_scale(ScalarKind kind) noexcept {
  switch (kind) {
    case ScalarKind::U8: return 1.0 / 255.0;
    case ScalarKind::U16: return 1.0 / 65535.0;
    default: return 1.0;
  }
}

namespace {

struct ResponseLayer {
  int filter = 0;
  std::ptrdiff_t rows = 0;
  std::ptrdiff_t cols = 0;
  std::vector<double> response;
  std::vector<std::int8_t> sign;

  double at(std::ptrdiff_t r, std::ptrdiff_t c) const {
    return response[static_cast<std::size_t>(r * cols + c)];
  }
};

std::vector<ResponseLayer> build_octave(const IntegralImage& ii, int octave, int nr_scales, int step) {
  const auto grid_rows = static_cast<std::ptrdiff_t>(ii.rows()) / step;
  const auto grid_cols = static_cast<std::ptrdiff_t>(ii.cols()) / step;
  std::vector<ResponseLayer> layers(static_cast<std::size_t>(nr_scales));
  for (int i = 0; i < nr_scales; ++i) {
    auto& layer = layers[static_cast<std::size_t>(i)];
    layer.filter = surf_filter_size(octave, i);
    layer.rows = grid_rows;
    layer.cols = grid_cols;
    layer.response.resize(static_cast<std::size_t>(grid_rows * grid_cols));
    layer.sign.resize(layer.response.size());
    for (std::ptrdiff_t gr = 0; gr < grid_rows; ++gr) {
      for (std::ptrdiff_t gc = 0; gc < grid_cols; ++gc) {
        const auto h = hessian_at(ii, gr * step, gc * step, layer.filter);
        const auto idx = static_cast<std::size_t>(gr * grid_cols + gc);
        layer.response[idx] = h.determinant;
        layer.sign[idx] = (h.dxx + h.dyy) >= 0.0 ? 1 : -1;
      }
    }
  }
  return layers;
}

bool strict_maximum(const std::vector<ResponseLayer>& layers, std::size_t layer, std::ptrdiff_t r,
                    std::ptrdiff_t c) {
  const double v = layers[layer].at(r, c);
  for (std::size_t s = layer - 1; s <= layer + 1; ++s) {
    for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
      for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
        if (s == layer && dr == 0 && dc == 0) continue;
        if (!(v > layers[s].at(r + dr, c + dc))) return false;
      }
    }
  }
  return true;
}

template <class Fn>
void for_each_maximum(const IntegralImage& ii, int nr_octaves, int nr_scales, int initial_step,
                      double threshold, Fn&& fn) {
  for (int o = 0; o < nr_octaves; ++o) {
    const int step = initial_step << o;
    const auto layers = build_octave(ii, o, nr_scales, step);
    for (std::size_t i = 1; i + 1 < layers.size(); ++i) {
      const auto& layer = layers[i];
      // Keep the largest filter of the 3-layer stack inside the image.
      const std::ptrdiff_t border = (layers[i + 1].filter + 1) / (2 * step);
      for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(border + 1, 1);
           r < layer.rows - std::max<std::ptrdiff_t>(border, 1); ++r) {
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(border + 1, 1);
             c < layer.cols - std::max<std::ptrdiff_t>(border, 1); ++c) {
          if (layer.at(r, c) <= threshold) continue;
          if (!strict_maximum(layers, i, r, c)) continue;
          fn(o, static_cast<int>(i), step, layers, r, c);
        }
      }
    }
  }
}

void check_detect_args(const Image& img, int nr_octaves, int nr_scales, int initial_step) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  if (nr_octaves < 1 || nr_octaves > 16) {
    throw Error(ErrorCode::InvalidArgument, "nr_octaves: must be in [1, 16], got " + std::to_string(nr_octaves));
  }
  if (nr_scales < 3) {
    throw Error(ErrorCode::InvalidArgument, "nr_scales: must be >= 3, got " + std::to_string(nr_scales));
  }
  if (initial_step < 1) {
    throw Error(ErrorCode::InvalidArgument, "initial_step: must be >= 1, got " + std::to_string(initial_step));
  }
  const auto largest = static_cast<std::size_t>(surf_filter_size(0, nr_scales - 1));
  if (img.rows() < largest || img.cols() < largest) {
    throw Error(ErrorCode::ImageTooSmall, "img: " + to_string(img.shape()) +
                                              " is smaller than the largest first-octave filter (" +
                                              std::to_string(largest) + ")");
  }
}

// Solves the 3x3 system H x = b by Cramer's rule; false when singular.
bool solve3(const double h[3][3], const double b[3], double x[3]) {
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(h);
  if (d == 0.0 || !std::isfinite(d)) return false;
  for (int k = 0; k < 3; ++k) {
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] = j == k ? b[i] : h[i][j];
    }
    x[k] = det3(m) / d;
  }
  return true;
}

}  // namespace

namespace detail {

std::vector<ScaleSpaceMaximum> surf_maxima(const IntegralImage& ii, int nr_octaves, int nr_scales,
                                           int initial_step, double threshold) {
  std::vector<ScaleSpaceMaximum> out;
  for_each_maximum(ii, nr_octaves, nr_scales, initial_step, threshold,
                   [&](int o, int i, int step, const std::vector<ResponseLayer>& layers, std::ptrdiff_t r,
                       std::ptrdiff_t c) {
                     out.push_back({o, i, r, c, step, layers[static_cast<std::size_t>(i)].at(r, c)});
                   });
  return out;
}

}  // namespace detail

std::vector<InterestPoint> surf_detect(const Image& img, int nr_octaves, int nr_scales, int initial_step,
                                       const SurfParams& params) {
  check_detect_args(img, nr_octaves, nr_scales, initial_step);
  const IntegralImage ii(img, surf_intensity_scale(img.kind()));
  std::vector<InterestPoint> points;
  for_each_maximum(
      ii, nr_octaves, nr_scales, initial_step, params.threshold,
      [&](int, int i, int step, const std::vector<ResponseLayer>& layers, std::ptrdiff_t r, std::ptrdiff_t c) {
        const auto& below = layers[static_cast<std::size_t>(i) - 1];
        const auto& mid = layers[static_cast<std::size_t>(i)];
        const auto& above = layers[static_cast<std::size_t>(i) + 1];
        const double v = mid.at(r, c);
        const double grad[3] = {
            (mid.at(r, c + 1) - mid.at(r, c - 1)) / 2.0,
            (mid.at(r + 1, c) - mid.at(r - 1, c)) / 2.0,
            (above.at(r, c) - below.at(r, c)) / 2.0,
        };
        const double dxx = mid.at(r, c + 1) + mid.at(r, c - 1) - 2.0 * v;
        const double dyy = mid.at(r + 1, c) + mid.at(r - 1, c) - 2.0 * v;
        const double dss = above.at(r, c) + below.at(r, c) - 2.0 * v;
        const double dxy = (mid.at(r + 1, c + 1) - mid.at(r + 1, c - 1) - mid.at(r - 1, c + 1) +
                            mid.at(r - 1, c - 1)) /
                           4.0;
        const double dxs = (above.at(r, c + 1) - above.at(r, c - 1) - below.at(r, c + 1) + below.at(r, c - 1)) / 4.0;
        const double dys = (above.at(r + 1, c) - above.at(r - 1, c) - below.at(r + 1, c) + below.at(r - 1, c)) / 4.0;
        const double hess[3][3] = {{dxx, dxy, dxs}, {dxy, dyy, dys}, {dxs, dys, dss}};
        const double rhs[3] = {-grad[0], -grad[1], -grad[2]};
        double offset[3];
        if (!solve3(hess, rhs, offset)) return;
        if (std::abs(offset[0]) >= 0.5 || std::abs(offset[1]) >= 0.5 || std::abs(offset[2]) >= 0.5) return;
        InterestPoint p;
        p.x = (static_cast<double>(c) + offset[0]) * step;
        p.y = (static_cast<double>(r) + offset[1]) * step;
        const double filter_step = mid.filter - below.filter;
        p.scale = 1.2 / 9.0 * (mid.filter + offset[2] * filter_step);
        p.score = v;
        p.laplacian_sign = mid.sign[static_cast<std::size_t>(r * mid.cols + c)];
        points.push_back(p);
      });
  std::stable_sort(points.begin(), points.end(), [](const InterestPoint& a, const InterestPoint& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  return points;
}

// ---------------------------------------------------------------------------
// Descriptors

namespace {

double haar_x(const IntegralImage& ii, std::ptrdiff_t row, std::ptrdiff_t col, std::ptrdiff_t size) {
  const std::ptrdiff_t h = size / 2;
  return ii.box_sum(row - h, col, size, h) - ii.box_sum(row - h, col - h, size, h);
}

double haar_y(const IntegralImage& ii, std::ptrdiff_t row, std::ptrdiff_t col, std::ptrdiff_t size) {
  const std::ptrdiff_t h = size / 2;
  return ii.box_sum(row, col - h, h, size) - ii.box_sum(row - h, col - h, h, size);
}

double positive_angle(double dx, double dy) {
  double a = std::atan2(dy, dx);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

double gaussian(double x, double y, double sigma) {
  return std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)) / (2.0 * std::numbers::pi * sigma * sigma);
}

double orientation(const IntegralImage& ii, const InterestPoint& p) {
  const auto s = std::max<std::ptrdiff_t>(1, std::lround(p.scale));
  const auto r = static_cast<std::ptrdiff_t>(std::lround(p.y));
  const auto c = static_cast<std::ptrdiff_t>(std::lround(p.x));
  struct Sample {
    double dx, dy, angle;
  };
  std::vector<Sample> samples;
  samples.reserve(113);
  for (int i = -6; i <= 6; ++i) {
    for (int j = -6; j <= 6; ++j) {
      if (i * i + j * j >= 36) continue;
      const double w = gaussian(i, j, 2.5);
      const double dx = w * haar_x(ii, r + j * s, c + i * s, 4 * s);
      const double dy = w * haar_y(ii, r + j * s, c + i * s, 4 * s);
      samples.push_back({dx, dy, positive_angle(dx, dy)});
    }
  }
  constexpr double window = std::numbers::pi / 3.0;
  double best = 0.0;
  double result = 0.0;
  for (double start = 0.0; start < 2.0 * std::numbers::pi; start += 0.15) {
    const double end = start + window;
    double sx = 0.0, sy = 0.0;
    for (const auto& smp : samples) {
      const bool inside = end < 2.0 * std::numbers::pi
                              ? (smp.angle >= start && smp.angle < end)
                              : (smp.angle >= start || smp.angle < end - 2.0 * std::numbers::pi);
      if (inside) {
        sx += smp.dx;
        sy += smp.dy;
      }
    }
    const double norm = sx * sx + sy * sy;
    if (norm > best) {
      best = norm;
      result = positive_angle(sx, sy);
    }
  }
  return result;
}

void describe(const IntegralImage& ii, InterestPoint& p) {
  const auto s = std::max<std::ptrdiff_t>(1, std::lround(p.scale));
  const double sd = static_cast<double>(s);
  const double co = std::cos(p.angle);
  const double si = std::sin(p.angle);
  std::size_t idx = 0;
  for (int j = 0; j < 4; ++j) {    // along v
    for (int i = 0; i < 4; ++i) {  // along u
      double sum_dx = 0.0, sum_adx = 0.0, sum_dy = 0.0, sum_ady = 0.0;
      for (int l = 0; l < 5; ++l) {
        for (int k = 0; k < 5; ++k) {
          const double u = (-10.0 + 5.0 * i + k + 0.5) * sd;
          const double v = (-10.0 + 5.0 * j + l + 0.5) * sd;
          const auto col = static_cast<std::ptrdiff_t>(std::lround(p.x + u * co - v * si));
          const auto row = static_cast<std::ptrdiff_t>(std::lround(p.y + u * si + v * co));
          const double w = gaussian(u, v, 3.3 * sd);
          const double rx = haar_x(ii, row, col, 2 * s);
          const double ry = haar_y(ii, row, col, 2 * s);
          const double du = w * (rx * co + ry * si);
          const double dv = w * (-rx * si + ry * co);
          sum_dx += du;
          sum_adx += std::abs(du);
          sum_dy += dv;
          sum_ady += std::abs(dv);
        }
      }
      p.descriptor[idx++] = sum_dx;
      p.descriptor[idx++] = sum_adx;
      p.descriptor[idx++] = sum_dy;
      p.descriptor[idx++] = sum_ady;
    }
  }
  double norm = 0.0;
  for (double d : p.descriptor) norm += d * d;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& d : p.descriptor) d /= norm;
  }
}

}  // namespace

std::vector<InterestPoint> surf_descriptors(const Image& img, std::vector<InterestPoint> points,
                                            const SurfParams& params) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const bool inside = std::isfinite(p.y) && std::isfinite(p.x) && p.y >= 0.0 && p.x >= 0.0 &&
                        p.y < static_cast<double>(img.rows()) && p.x < static_cast<double>(img.cols());
    if (!inside || !(p.scale > 0.0)) {
      throw Error(ErrorCode::PointOutOfBounds, "points[" + std::to_string(i) + "]: (" + std::to_string(p.y) +
                                                   ", " + std::to_string(p.x) + ") scale " +
                                                   std::to_string(p.scale) + " lies outside " +
                                                   to_string(img.shape()));
    }
  }
  const IntegralImage ii(img, surf_intensity_scale(img.kind()));
  for (auto& p : points) {
    p.angle = params.upright ? 0.0 : orientation(ii, p);
    describe(ii, p);
  }
  return points;
}

std::vector<InterestPoint> surf(const Image& img, int nr_octaves, int nr_scales, int initial_step,
                                const SurfParams& params) {
  return surf_descriptors(img, surf_detect(img, nr_octaves, nr_scales, initial_step, params), params);
}

RgbImage show_surf(const Image& img, std::span<const InterestPoint> points, std::span<const int> cluster_ids,
                   std::span<const Rgb> colors) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  if (cluster_ids.size() != points.size()) {
    throw Error(ErrorCode::LengthMismatch, "cluster_ids: expected " + std::to_string(points.size()) +
                                               " entries (one per point), got " +
                                               std::to_string(cluster_ids.size()));
  }
  if (colors.empty()) throw Error(ErrorCode::InvalidArgument, "colors: palette is empty");

  const Image grey = img.kind() == ScalarKind::U8 ? img : convert(img, ScalarKind::U8);
  const auto g = grey.view<std::uint8_t>();
  RgbImage out(img.rows(), img.cols());
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      std::uint8_t* px = out.pixel(r, c);
      px[0] = px[1] = px[2] = g(r, c);
    }
  }
  const auto rows = static_cast<std::ptrdiff_t>(out.rows);
  const auto cols = static_cast<std::ptrdiff_t>(out.cols);
  const auto ncolors = static_cast<std::ptrdiff_t>(colors.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::ptrdiff_t ci = cluster_ids[i] % ncolors;
    if (ci < 0) ci += ncolors;
    const Rgb color = colors[static_cast<std::size_t>(ci)];
    const auto r0 = static_cast<std::ptrdiff_t>(std::lround(p.y - p.scale));
    const auto r1 = static_cast<std::ptrdiff_t>(std::lround(p.y + p.scale));
    const auto c0 = static_cast<std::ptrdiff_t>(std::lround(p.x - p.scale));
    const auto c1 = static_cast<std::ptrdiff_t>(std::lround(p.x + p.scale));
    auto plot = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
      if (r < 0 || c < 0 || r >= rows || c >= cols) return;
      std::uint8_t* px = out.pixel(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      px[0] = color.r;
      px[1] = color.g;
      px[2] = color.b;
    };
    for (std::ptrdiff_t c = c0; c <= c1; ++c) {
      plot(r0, c);
      plot(r1, c);
    }
    for (std::ptrdiff_t r = r0; r <= r1; ++r) {
      plot(r, c0);
      plot(r, c1);
    }
  }
  return out;
}

}  // namespace visionkit
