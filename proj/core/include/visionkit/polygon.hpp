#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "visionkit/image.hpp"

namespace visionkit {

struct Point {
  std::int64_t row = 0;
  std::int64_t col = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

using PointList = std::vector<Point>;

/// Andrew's monotone chain. Vertices are counterclockwise in (x = col,
/// y = row) coordinates, start at the smallest (col, row), and contain no
/// collinear triples. One or two vertices for degenerate inputs.
PointList convex_hull_points(std::span<const Point> points);

/// Foreground (nonzero) pixel coordinates in row-major order.
PointList foreground_points(const Image& binary);

/// U8 image holding 1 on every lattice point inside or on the convex hull
/// of the foreground. Throws NoForeground.
Image convex_hull(const Image& binary);

/// Scanline fill, even-odd rule, boundary inclusive. Writes `value`
/// (saturated to the canvas kind) in place. Throws TooFewVertices.
Image& fill_polygon(std::span<const Point> vertices, Image& canvas, double value = 1.0);

}  // namespace visionkit
