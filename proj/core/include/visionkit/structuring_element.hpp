#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "visionkit/image.hpp"

namespace visionkit {

struct Offset {
  std::ptrdiff_t row = 0;
  std::ptrdiff_t col = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Neighborhood mask with optional additive weights (grayscale morphology).
///
/// The anchor defaults to (rows / 2, cols / 2), so even-sized elements
/// anchor on the lower-right of their two middle cells.
class StructuringElement {
 public:
  struct Cell {
    Offset offset;  // relative to the anchor
    double weight = 0.0;
  };

  /// `mask` is row-major rows x cols; `weights` (same layout) may be empty
  /// for a flat element.
  StructuringElement(std::size_t rows, std::size_t cols, std::vector<bool> mask,
                     std::vector<double> weights = {}, std::optional<Offset> center = std::nullopt);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Offset center() const noexcept { return center_; }
  bool contains(std::size_t r, std::size_t c) const { return mask_[r * cols_ + c]; }
  double weight(std::size_t r, std::size_t c) const { return weights_[r * cols_ + c]; }

  /// True cells in row-major order.
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t count() const noexcept { return cells_.size(); }
  bool flat() const noexcept;

  /// Largest |offset| along each axis.
  Offset reach() const noexcept { return reach_; }

  /// Point reflection through the anchor.
  StructuringElement reflect() const;

  friend bool operator==(const StructuringElement& a, const StructuringElement& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.mask_ == b.mask_ &&
           a.weights_ == b.weights_ && a.center_ == b.center_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<bool> mask_;
  std::vector<double> weights_;
  Offset center_;
  Offset reach_;
  std::vector<Cell> cells_;
};

/// The default neighborhood: 3x3 cross, flat, anchored at (1, 1).
StructuringElement make_cross_3x3();

/// Flat size x size square.
StructuringElement make_box(std::size_t size);

enum class BorderMode { ExtendNearest };

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) noexcept {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

struct Position {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// Maps any coordinate, in or out of bounds, to the pixel that supplies its value.
inline Position resolve(BorderMode, std::ptrdiff_t row, std::ptrdiff_t col, Shape shape) noexcept {
  return {clamp_index(row, shape.rows), clamp_index(col, shape.cols)};
}

/// Walks an image in row-major order and exposes, for the current pixel, the
/// value under every true cell of a structuring element. Out-of-bounds cells
/// resolve through the border mode.
template <Scalar T>
class NeighborhoodCursor {
 public:
  NeighborhoodCursor(ImageView<const T> img, const StructuringElement& se,
                     BorderMode mode = BorderMode::ExtendNearest)
      : img_(img), mode_(mode) {
    if (se.count() == 0) {
      throw Error(ErrorCode::EmptyStructuringElement, "se: structuring element has no true cells");
    }
    offsets_.reserve(se.count());
    linear_.reserve(se.count());
    for (const auto& cell : se.cells()) {
      offsets_.push_back(cell.offset);
      weights_.push_back(cell.weight);
      linear_.push_back(cell.offset.row * static_cast<std::ptrdiff_t>(img.stride) + cell.offset.col);
    }
    reach_ = se.reach();
    update_interior();
  }

  bool done() const noexcept { return row_ >= img_.rows; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  Offset offset(std::size_t j) const noexcept { return offsets_[j]; }
  double weight(std::size_t j) const noexcept { return weights_[j]; }

  T operator[](std::size_t j) const noexcept {
    if (interior_) return img_.data[static_cast<std::ptrdiff_t>(row_ * img_.stride + col_) + linear_[j]];
    const auto p = resolve(mode_, static_cast<std::ptrdiff_t>(row_) + offsets_[j].row,
                           static_cast<std::ptrdiff_t>(col_) + offsets_[j].col, img_.shape());
    return img_(p.row, p.col);
  }

  void advance() noexcept {
    if (++col_ == img_.cols) {
      col_ = 0;
      ++row_;
    }
    update_interior();
  }

 private:
  void update_interior() noexcept {
    const auto r = static_cast<std::ptrdiff_t>(row_);
    const auto c = static_cast<std::ptrdiff_t>(col_);
    interior_ = r >= reach_.row && r + reach_.row < static_cast<std::ptrdiff_t>(img_.rows) &&
                c >= reach_.col && c + reach_.col < static_cast<std::ptrdiff_t>(img_.cols);
  }

  ImageView<const T> img_;
  BorderMode mode_;
  std::vector<Offset> offsets_;
  std::vector<double> weights_;
  std::vector<std::ptrdiff_t> linear_;
  Offset reach_;
  std::size_t row_ = 0;
  std::size_t col_ = 0;
  bool interior_ = false;
};

template <Scalar T>
NeighborhoodCursor<T> neighborhood_iter(ImageView<const T> img, const StructuringElement& se,
                                        BorderMode mode = BorderMode::ExtendNearest) {
  return NeighborhoodCursor<T>(img, se, mode);
}

}  // namespace visionkit
