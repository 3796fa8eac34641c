#include "visionkit/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace visionkit {
namespace {

std::int64_t cross(const Point& o, const Point& a, const Point& b) {
  return (a.col - o.col) * (b.row - o.row) - (a.row - o.row) * (b.col - o.col);
}

bool by_col_then_row(const Point& a, const Point& b) {
  return a.col != b.col ? a.col < b.col : a.row < b.row;
}

template <Scalar T>
T saturate_cast(double v) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(v);
  } else {
    if (std::isnan(v)) return T{0};
    const double t = std::trunc(v);
    if (t <= static_cast<double>(std::numeric_limits<T>::lowest())) return std::numeric_limits<T>::lowest();
    if (t >= static_cast<double>(std::numeric_limits<T>::max())) return std::numeric_limits<T>::max();
    return static_cast<T>(t);
  }
}

// x = num / den at a scanline, den > 0.
struct Crossing {
  std::int64_t num;
  std::int64_t den;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

PointList convex_hull_points(std::span<const Point> input) {
  PointList pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), by_col_then_row);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  PointList hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

PointList foreground_points(const Image& binary) {
  PointList pts;
  for (std::size_t r = 0; r < binary.rows(); ++r) {
    for (std::size_t c = 0; c < binary.cols(); ++c) {
      if (binary.value(r, c) != 0.0) pts.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(c)});
    }
  }
  return pts;
}

Image convex_hull(const Image& binary) {
  if (binary.empty()) throw Error(ErrorCode::InvalidArgument, "binary: image is empty");
  // Only the extreme pixels of each row can be hull vertices.
  PointList candidates;
  for (std::size_t r = 0; r < binary.rows(); ++r) {
    std::int64_t first = -1, last = -1;
    for (std::size_t c = 0; c < binary.cols(); ++c) {
      if (binary.value(r, c) == 0.0) continue;
      if (first < 0) first = static_cast<std::int64_t>(c);
      last = static_cast<std::int64_t>(c);
    }
    if (first < 0) continue;
    candidates.push_back({static_cast<std::int64_t>(r), first});
    if (last != first) candidates.push_back({static_cast<std::int64_t>(r), last});
  }
  if (candidates.empty()) throw Error(ErrorCode::NoForeground, "binary: no foreground pixel");

  const PointList hull = convex_hull_points(candidates);
  Image out(binary.shape(), ScalarKind::U8);
  auto v = out.view<std::uint8_t>();
  std::int64_t rmin = hull[0].row, rmax = hull[0].row, cmin = hull[0].col, cmax = hull[0].col;
  for (const auto& p : hull) {
    rmin = std::min(rmin, p.row);
    rmax = std::max(rmax, p.row);
    cmin = std::min(cmin, p.col);
    cmax = std::max(cmax, p.col);
  }
  for (std::int64_t r = rmin; r <= rmax; ++r) {
    for (std::int64_t c = cmin; c <= cmax; ++c) {
      const Point p{r, c};
      bool inside = true;
      if (hull.size() <= 2) {
        // A point or a segment: bounding box plus collinearity.
        inside = cross(hull.front(), hull.back(), p) == 0;
      } else {
        for (std::size_t i = 0; i < hull.size() && inside; ++i) {
          inside = cross(hull[i], hull[(i + 1) % hull.size()], p) >= 0;
        }
      }
      if (inside) v(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = 1;
    }
  }
  return out;
}

Image& fill_polygon(std::span<const Point> vertices, Image& canvas, double value) {
  if (vertices.size() < 3) {
    throw Error(ErrorCode::TooFewVertices,
                "vertices: a polygon needs at least 3 vertices, got " + std::to_string(vertices.size()));
  }
  if (canvas.empty()) throw Error(ErrorCode::InvalidArgument, "canvas: image is empty");
  const auto rows = static_cast<std::int64_t>(canvas.rows());
  const auto cols = static_cast<std::int64_t>(canvas.cols());
  std::int64_t ymin = vertices[0].row, ymax = vertices[0].row;
  for (const auto& p : vertices) {
    ymin = std::min(ymin, p.row);
    ymax = std::max(ymax, p.row);
  }

  visit_kind(canvas.kind(), [&]<class T>(std::type_identity<T>) {
    const auto v = canvas.view<T>();
    const T fill = saturate_cast<T>(value);
    auto span = [&](std::int64_t y, std::int64_t c0, std::int64_t c1) {
      c0 = std::max<std::int64_t>(c0, 0);
      c1 = std::min<std::int64_t>(c1, cols - 1);
      T* row = v.row(static_cast<std::size_t>(y));
      for (std::int64_t c = c0; c <= c1; ++c) row[c] = fill;
    };
    std::vector<Crossing> crossings;
    const std::size_t n = vertices.size();
    for (std::int64_t y = std::max<std::int64_t>(ymin, 0); y <= std::min(ymax, rows - 1); ++y) {
      crossings.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % n];
        const std::int64_t lo = std::min(a.row, b.row);
        const std::int64_t hi = std::max(a.row, b.row);
        if (y < lo || y > hi) continue;
        if (a.row == b.row) {
          span(y, std::min(a.col, b.col), std::max(a.col, b.col));
          continue;
        }
        // x = a.col + (y - a.row) * (b.col - a.col) / (b.row - a.row)
        std::int64_t den = b.row - a.row;
        std::int64_t num = a.col * den + (y - a.row) * (b.col - a.col);
        if (den < 0) {
          den = -den;
          num = -num;
        }
        if (num % den == 0) span(y, num / den, num / den);
        if (y < hi) crossings.push_back({num, den});
      }
      std::sort(crossings.begin(), crossings.end(), [](const Crossing& p, const Crossing& q) {
        return p.num * q.den < q.num * p.den;
      });
      for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
        span(y, ceil_div(crossings[i].num, crossings[i].den), floor_div(crossings[i + 1].num, crossings[i + 1].den));
      }
    }
  });
  return canvas;
}

}  // namespace visionkit
