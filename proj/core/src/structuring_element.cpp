#include "visionkit/structuring_element.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace visionkit {

StructuringElement::StructuringElement(std::size_t rows, std::size_t cols, std::vector<bool> mask,
                                       std::vector<double> weights, std::optional<Offset> center)
    : rows_(rows), cols_(cols), mask_(std::move(mask)), weights_(std::move(weights)) {
  if (rows == 0 || cols == 0 || mask_.size() != rows * cols) {
    throw Error(ErrorCode::InvalidArgument, "se: mask of " + std::to_string(mask_.size()) +
                                                " cells does not match shape " +
                                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (weights_.empty()) weights_.assign(rows * cols, 0.0);
  if (weights_.size() != rows * cols) {
    throw Error(ErrorCode::InvalidArgument, "se: weights must have " + std::to_string(rows * cols) +
                                                " entries, got " + std::to_string(weights_.size()));
  }
  center_ = center.value_or(Offset{static_cast<std::ptrdiff_t>(rows / 2),
                                   static_cast<std::ptrdiff_t>(cols / 2)});
  if (center_.row < 0 || center_.col < 0 || center_.row >= static_cast<std::ptrdiff_t>(rows) ||
      center_.col >= static_cast<std::ptrdiff_t>(cols)) {
    throw Error(ErrorCode::InvalidArgument, "se: center lies outside the mask");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!mask_[r * cols + c]) {
        weights_[r * cols + c] = 0.0;
        continue;
      }
      const Offset off{static_cast<std::ptrdiff_t>(r) - center_.row,
                       static_cast<std::ptrdiff_t>(c) - center_.col};
      cells_.push_back({off, weights_[r * cols + c]});
      reach_.row = std::max(reach_.row, off.row < 0 ? -off.row : off.row);
      reach_.col = std::max(reach_.col, off.col < 0 ? -off.col : off.col);
    }
  }
  if (cells_.empty()) {
    throw Error(ErrorCode::EmptyStructuringElement, "se: structuring element has no true cells");
  }
}

bool StructuringElement::flat() const noexcept {
  return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.weight == 0.0; });
}

StructuringElement StructuringElement::reflect() const {
  std::vector<bool> mask(rows_ * cols_);
  std::vector<double> weights(rows_ * cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const std::size_t src = (rows_ - 1 - r) * cols_ + (cols_ - 1 - c);
      mask[r * cols_ + c] = mask_[src];
      weights[r * cols_ + c] = weights_[src];
    }
  }
  const Offset center{static_cast<std::ptrdiff_t>(rows_) - 1 - center_.row,
                      static_cast<std::ptrdiff_t>(cols_) - 1 - center_.col};
  return StructuringElement(rows_, cols_, std::move(mask), std::move(weights), center);
}

StructuringElement make_cross_3x3() {
  return StructuringElement(3, 3, {false, true, false, true, true, true, false, true, false});
}

StructuringElement make_box(std::size_t size) {
  return StructuringElement(size, size, std::vector<bool>(size * size, true));
}

}  // namespace visionkit
