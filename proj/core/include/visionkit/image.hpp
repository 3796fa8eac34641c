#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "visionkit/error.hpp"

namespace visionkit {

enum class ScalarKind : std::uint8_t { U8, U16, I32, F32, F64 };

std::string_view to_string(ScalarKind kind) noexcept;
std::size_t size_of(ScalarKind kind) noexcept;

template <class T>
concept Scalar = std::is_same_v<T, std::uint8_t> || std::is_same_v<T, std::uint16_t> ||
                 std::is_same_v<T, std::int32_t> || std::is_same_v<T, float> ||
                 std::is_same_v<T, double>;

template <Scalar T>
constexpr ScalarKind kind_of() noexcept {
  if constexpr (std::is_same_v<T, std::uint8_t>) return ScalarKind::U8;
  else if constexpr (std::is_same_v<T, std::uint16_t>) return ScalarKind::U16;
  else if constexpr (std::is_same_v<T, std::int32_t>) return ScalarKind::I32;
  else if constexpr (std::is_same_v<T, float>) return ScalarKind::F32;
  else return ScalarKind::F64;
}

/// Calls `fn(std::type_identity<T>{})` with T the C++ type for `kind`.
template <class Fn>
decltype(auto) visit_kind(ScalarKind kind, Fn&& fn) {
  switch (kind) {
    case ScalarKind::U8: return fn(std::type_identity<std::uint8_t>{});
    case ScalarKind::U16: return fn(std::type_identity<std::uint16_t>{});
    case ScalarKind::I32: return fn(std::type_identity<std::int32_t>{});
    case ScalarKind::F32: return fn(std::type_identity<float>{});
    case ScalarKind::F64: break;
  }
  return fn(std::type_identity<double>{});
}

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(Shape shape);

/// Typed, strided window onto image memory. Cheap to copy.
template <class T>
struct ImageView {
  T* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;  // elements between row starts

  T* row(std::size_t r) const noexcept { return data + r * stride; }
  T& operator()(std::size_t r, std::size_t c) const noexcept { return data[r * stride + c]; }
  bool contiguous() const noexcept { return stride == cols; }
  Shape shape() const noexcept { return {rows, cols}; }
};

/// Row-major 2D pixel grid with a runtime scalar kind.
///
/// Copies share the pixel buffer (handle semantics, like a numpy array);
/// use clone() for a deep copy. Owned buffers are contiguous. Views made by
/// row_view() may skip rows and are then not contiguous; they are accepted
/// as inputs everywhere but rejected as `out` destinations.
class Image {
 public:
  Image() = default;
  Image(Shape shape, ScalarKind kind);
  Image(std::size_t rows, std::size_t cols, ScalarKind kind) : Image(Shape{rows, cols}, kind) {}

  template <Scalar T>
  static Image from_values(Shape shape, std::span<const T> values);
  template <Scalar T>
  static Image from_values(Shape shape, std::initializer_list<T> values) {
    return from_values<T>(shape, std::span<const T>(values.begin(), values.size()));
  }
  template <Scalar T>
  static Image filled(Shape shape, T value);

  bool empty() const noexcept { return storage_ == nullptr; }
  Shape shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return shape_.rows; }
  std::size_t cols() const noexcept { return shape_.cols; }
  std::size_t size() const noexcept { return shape_.size(); }
  std::size_t stride() const noexcept { return stride_; }
  ScalarKind kind() const noexcept { return kind_; }
  bool contiguous() const noexcept { return stride_ == shape_.cols; }

  template <Scalar T>
  ImageView<T> view() {
    require_kind(kind_of<T>());
    return {reinterpret_cast<T*>(base()), shape_.rows, shape_.cols, stride_};
  }
  template <Scalar T>
  ImageView<const T> view() const {
    require_kind(kind_of<T>());
    return {reinterpret_cast<const T*>(base()), shape_.rows, shape_.cols, stride_};
  }

  template <Scalar T>
  T& at(std::size_t r, std::size_t c) {
    return view<T>()(r, c);
  }
  template <Scalar T>
  T at(std::size_t r, std::size_t c) const {
    return view<T>()(r, c);
  }

  /// Pixel value of any kind, widened to double.
  double value(std::size_t r, std::size_t c) const;

  /// Every `step`-th row starting at `first`, sharing this image's buffer.
  Image row_view(std::size_t first, std::size_t count, std::size_t step) const;

  /// Deep, contiguous copy.
  Image clone() const;

  bool shares_storage(const Image& other) const noexcept {
    return storage_ != nullptr && storage_ == other.storage_;
  }

  /// Row-major copy of the pixels.
  template <Scalar T>
  std::vector<T> to_vector() const;

  void require_kind(ScalarKind expected, std::string_view argument = "image") const;

 private:
  std::byte* base() const noexcept { return storage_.get() + offset_bytes_; }

  std::shared_ptr<std::byte[]> storage_;
  std::size_t offset_bytes_ = 0;
  Shape shape_;
  std::size_t stride_ = 0;
  ScalarKind kind_ = ScalarKind::U8;
};

/// Elementwise conversion. Float to integer truncates toward zero, then every
/// narrowing clamps to the target range. NaN maps to zero.
Image convert(const Image& img, ScalarKind target);

/// Throws unless `out` is contiguous with the required shape and kind.
void validate_out(const Image& out, Shape shape, ScalarKind kind, std::string_view argument = "out");

/// Two images have identical shape, kind and pixel values.
bool equal(const Image& a, const Image& b);

/// Interleaved 3-channel 8-bit image.
struct RgbImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;  // rows * cols * 3

  RgbImage() = default;
  RgbImage(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c * 3, 0) {}

  std::uint8_t* pixel(std::size_t r, std::size_t c) { return data.data() + (r * cols + c) * 3; }
  const std::uint8_t* pixel(std::size_t r, std::size_t c) const {
    return data.data() + (r * cols + c) * 3;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// ---------------------------------------------------------------------------

template <Scalar T>
Image Image::from_values(Shape shape, std::span<const T> values) {
  if (values.size() != shape.size()) {
    throw Error(ErrorCode::ShapeMismatch, "values: expected " + std::to_string(shape.size()) +
                                              " elements for shape " + to_string(shape) + ", got " +
                                              std::to_string(values.size()));
  }
  Image img(shape, kind_of<T>());
  auto v = img.view<T>();
  for (std::size_t i = 0; i < values.size(); ++i) v.data[i] = values[i];
  return img;
}

template <Scalar T>
Image Image::filled(Shape shape, T value) {
  Image img(shape, kind_of<T>());
  auto v = img.view<T>();
  for (std::size_t i = 0; i < shape.size(); ++i) v.data[i] = value;
  return img;
}

template <Scalar T>
std::vector<T> Image::to_vector() const {
  auto v = view<T>();
  std::vector<T> result;
  result.reserve(size());
  for (std::size_t r = 0; r < v.rows; ++r) result.insert(result.end(), v.row(r), v.row(r) + v.cols);
  return result;
}

}  // namespace visionkit
