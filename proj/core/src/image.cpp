#include "visionkit/image.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace visionkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotContiguous: return "NotContiguous";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::EmptyStructuringElement: return "EmptyStructuringElement";
    case ErrorCode::NoMarkers: return "NoMarkers";
    case ErrorCode::AllForeground: return "AllForeground";
    case ErrorCode::EvenKernel: return "EvenKernel";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::EmptyDisk: return "EmptyDisk";
    case ErrorCode::ZeroImage: return "ZeroImage";
    case ErrorCode::NoForeground: return "NoForeground";
    case ErrorCode::OddDimensions: return "OddDimensions";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::PointOutOfBounds: return "PointOutOfBounds";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::Io: return "Io";
    case ErrorCode::TooFewVectors: return "TooFewVectors";
  }
  return "Unknown";
}

std::string_view to_string(ScalarKind kind) noexcept {
  switch (kind) {
    case ScalarKind::U8: return "U8";
    case ScalarKind::U16: return "U16";
    case ScalarKind::I32: return "I32";
    case ScalarKind::F32: return "F32";
    case ScalarKind::F64: return "F64";
  }
  return "?";
}

std::size_t size_of(ScalarKind kind) noexcept {
  return visit_kind(kind, []<class T>(std::type_identity<T>) { return sizeof(T); });
}

std::string to_string(Shape shape) {
  return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

Image::Image(Shape shape, ScalarKind kind) : shape_(shape), stride_(shape.cols), kind_(kind) {
  if (shape.rows == 0 || shape.cols == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "shape: image dimensions must be at least 1x1, got " + to_string(shape));
  }
  const std::size_t bytes = shape.size() * size_of(kind);
  storage_ = std::shared_ptr<std::byte[]>(new std::byte[bytes]);
  std::memset(storage_.get(), 0, bytes);
}

void Image::require_kind(ScalarKind expected, std::string_view argument) const {
  if (empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(argument) + ": image is empty");
  }
  if (kind_ != expected) {
    throw Error(ErrorCode::KindMismatch, std::string(argument) + ": expected scalar kind " +
                                             std::string(to_string(expected)) + ", got " +
                                             std::string(to_string(kind_)));
  }
}

double Image::value(std::size_t r, std::size_t c) const {
  return visit_kind(kind_, [&]<class T>(std::type_identity<T>) {
    return static_cast<double>(view<T>()(r, c));
  });
}

Image Image::row_view(std::size_t first, std::size_t count, std::size_t step) const {
  if (empty() || count == 0 || step == 0 || first + (count - 1) * step >= shape_.rows) {
    throw Error(ErrorCode::InvalidArgument, "row_view: rows " + std::to_string(first) + " + k*" +
                                                std::to_string(step) + " for k < " +
                                                std::to_string(count) + " exceed image rows " +
                                                std::to_string(shape_.rows));
  }
  Image v = *this;
  v.offset_bytes_ += first * stride_ * size_of(kind_);
  v.stride_ = stride_ * step;
  v.shape_ = {count, shape_.cols};
  return v;
}

Image Image::clone() const {
  if (empty()) return {};
  Image copy(shape_, kind_);
  const std::size_t row_bytes = shape_.cols * size_of(kind_);
  const std::size_t stride_bytes = stride_ * size_of(kind_);
  for (std::size_t r = 0; r < shape_.rows; ++r) {
    std::memcpy(copy.base() + r * row_bytes, base() + r * stride_bytes, row_bytes);
  }
  return copy;
}

namespace {

template <class To, class From>
To convert_value(From v) {
  if constexpr (std::is_floating_point_v<To>) {
    return static_cast<To>(v);
  } else {
    constexpr auto lo = std::numeric_limits<To>::lowest();
    constexpr auto hi = std::numeric_limits<To>::max();
    if constexpr (std::is_floating_point_v<From>) {
      if (std::isnan(v)) return To{0};
      const double t = std::trunc(static_cast<double>(v));
      if (t <= static_cast<double>(lo)) return lo;
      if (t >= static_cast<double>(hi)) return hi;
      return static_cast<To>(t);
    } else {
      const auto w = static_cast<std::int64_t>(v);
      if (w <= static_cast<std::int64_t>(lo)) return lo;
      if (w >= static_cast<std::int64_t>(hi)) return hi;
      return static_cast<To>(w);
    }
  }
}

}  // namespace

Image convert(const Image& img, ScalarKind target) {
  Image out(img.shape(), target);
  visit_kind(img.kind(), [&]<class From>(std::type_identity<From>) {
    visit_kind(target, [&]<class To>(std::type_identity<To>) {
      const auto src = img.view<From>();
      const auto dst = out.view<To>();
      for (std::size_t r = 0; r < src.rows; ++r) {
        const From* s = src.row(r);
        To* d = dst.row(r);
        for (std::size_t c = 0; c < src.cols; ++c) d[c] = convert_value<To>(s[c]);
      }
    });
  });
  return out;
}

void validate_out(const Image& out, Shape shape, ScalarKind kind, std::string_view argument) {
  const std::string name(argument);
  if (out.empty()) {
    throw Error(ErrorCode::InvalidArgument, name + ": output image is empty");
  }
  if (!out.contiguous()) {
    throw Error(ErrorCode::NotContiguous,
                name + ": output must be a contiguous array (row stride " + std::to_string(out.stride()) +
                    " != width " + std::to_string(out.cols()) + ")");
  }
  if (out.shape() != shape) {
    throw Error(ErrorCode::ShapeMismatch, name + ": expected shape " + to_string(shape) + ", got " +
                                              to_string(out.shape()));
  }
  if (out.kind() != kind) {
    throw Error(ErrorCode::KindMismatch, name + ": expected scalar kind " + std::string(to_string(kind)) +
                                             ", got " + std::string(to_string(out.kind())));
  }
}

bool equal(const Image& a, const Image& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  if (a.shape() != b.shape() || a.kind() != b.kind()) return false;
  return visit_kind(a.kind(), [&]<class T>(std::type_identity<T>) {
    const auto va = a.view<T>();
    const auto vb = b.view<T>();
    for (std::size_t r = 0; r < va.rows; ++r) {
      for (std::size_t c = 0; c < va.cols; ++c) {
        if (!(va(r, c) == vb(r, c))) return false;
      }
    }
    return true;
  });
}

}  // namespace visionkit
