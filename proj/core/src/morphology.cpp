#include "visionkit/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace visionkit {
namespace {

template <Scalar T>
using Wide = std::conditional_t<std::is_floating_point_v<T>, T, std::int64_t>;

template <Scalar T>
Wide<T> weight_as(double w) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(w);
  } else {
    return static_cast<std::int64_t>(std::trunc(w));
  }
}

template <Scalar T>
T saturate(Wide<T> v) {
  if constexpr (std::is_floating_point_v<T>) {
    return v;
  } else {
    constexpr auto lo = static_cast<std::int64_t>(std::numeric_limits<T>::lowest());
    constexpr auto hi = static_cast<std::int64_t>(std::numeric_limits<T>::max());
    return static_cast<T>(std::clamp(v, lo, hi));
  }
}

struct ErodeOp {
  template <Scalar T>
  static constexpr T identity() {
    return std::numeric_limits<T>::max();
  }
  template <Scalar T>
  static T combine(T acc, T v) {
    return std::min(acc, v);
  }
  template <Scalar T>
  static T apply(T v, Wide<T> w) {
    return saturate<T>(static_cast<Wide<T>>(v) - w);
  }
};

struct DilateOp {
  template <Scalar T>
  static constexpr T identity() {
    return std::numeric_limits<T>::lowest();
  }
  template <Scalar T>
  static T combine(T acc, T v) {
    return std::max(acc, v);
  }
  template <Scalar T>
  static T apply(T v, Wide<T> w) {
    return saturate<T>(static_cast<Wide<T>>(v) + w);
  }
};

void check_args(const Image& img, const Image& out) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "img: image is empty");
  validate_out(out, img.shape(), img.kind());
}

template <class Op, Scalar T>
void generic_kernel(ImageView<const T> in, const StructuringElement& se, ImageView<T> out) {
  NeighborhoodCursor<T> cursor(in, se);
  std::vector<Wide<T>> weights;
  for (const auto& cell : se.cells()) weights.push_back(weight_as<T>(cell.weight));
  const std::size_t n = cursor.size();
  for (; !cursor.done(); cursor.advance()) {
    T value = Op::template identity<T>();
    for (std::size_t j = 0; j != n; ++j) {
      value = Op::combine(value, Op::template apply<T>(cursor[j], weights[j]));
    }
    out(cursor.row(), cursor.col()) = value;
  }
}

// Sweeps whole rows per structuring-element cell. The unclamped middle span
// of each row is a straight loop over contiguous bytes.
template <class Op>
void row_sweep_u8(ImageView<const std::uint8_t> in, const StructuringElement& se,
                  ImageView<std::uint8_t> out) {
  const auto rows = static_cast<std::ptrdiff_t>(in.rows);
  const auto cols = static_cast<std::ptrdiff_t>(in.cols);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    std::uint8_t* o = out.row(static_cast<std::size_t>(r));
    std::fill(o, o + cols, Op::template identity<std::uint8_t>());
    for (const auto& cell : se.cells()) {
      const std::uint8_t* s = in.row(clamp_index(r + cell.offset.row, in.rows));
      const std::ptrdiff_t dc = cell.offset.col;
      const std::int64_t w = weight_as<std::uint8_t>(cell.weight);
      const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(-dc, 0, cols);
      const std::ptrdiff_t hi = std::clamp<std::ptrdiff_t>(cols - dc, lo, cols);
      auto edge = [&](std::ptrdiff_t c) {
        const std::uint8_t v = s[clamp_index(c + dc, in.cols)];
        o[c] = Op::combine(o[c], Op::template apply<std::uint8_t>(v, w));
      };
      for (std::ptrdiff_t c = 0; c < lo; ++c) edge(c);
      const std::uint8_t* sp = s + dc;
      if (w == 0) {
        for (std::ptrdiff_t c = lo; c < hi; ++c) o[c] = Op::combine(o[c], sp[c]);
      } else {
        for (std::ptrdiff_t c = lo; c < hi; ++c) {
          o[c] = Op::combine(o[c], Op::template apply<std::uint8_t>(sp[c], w));
        }
      }
      for (std::ptrdiff_t c = hi; c < cols; ++c) edge(c);
    }
  }
}

// Runs `kernel` into `out`, going through a temporary when `out` aliases `img`.
template <class Kernel>
void with_alias_guard(const Image& img, Image& out, Kernel&& kernel) {
  if (out.shares_storage(img)) {
    Image tmp(img.shape(), img.kind());
    kernel(tmp);
    visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
      const auto src = tmp.view<T>();
      const auto dst = out.view<T>();
      std::copy(src.data, src.data + src.rows * src.cols, dst.data);
    });
  } else {
    kernel(out);
  }
}

template <class Op>
void run_generic(const Image& img, const StructuringElement& se, Image& out) {
  check_args(img, out);
  with_alias_guard(img, out, [&](Image& dst) {
    visit_kind(img.kind(), [&]<class T>(std::type_identity<T>) {
      generic_kernel<Op, T>(img.view<T>(), se, dst.view<T>());
    });
  });
}

template <class Op>
void run_fast_u8(const Image& img, const StructuringElement& se, Image& out) {
  check_args(img, out);
  img.require_kind(ScalarKind::U8, "img");
  with_alias_guard(img, out, [&](Image& dst) {
    row_sweep_u8<Op>(img.view<std::uint8_t>(), se, dst.view<std::uint8_t>());
  });
}

bool fast_path_applies(const Image& img) {
  return img.kind() == ScalarKind::U8 && img.contiguous();
}

}  // namespace

namespace detail {

void erode_generic(const Image& img, const StructuringElement& se, Image& out) {
  run_generic<ErodeOp>(img, se, out);
}

void dilate_generic(const Image& img, const StructuringElement& se, Image& out) {
  run_generic<DilateOp>(img, se.reflect(), out);
}

void erode_fast_u8(const Image& img, const StructuringElement& se, Image& out) {
  run_fast_u8<ErodeOp>(img, se, out);
}

void dilate_fast_u8(const Image& img, const StructuringElement& se, Image& out) {
  run_fast_u8<DilateOp>(img, se.reflect(), out);
}

}  // namespace detail

Image& erode(const Image& img, const StructuringElement& se, Image& out) {
  if (fast_path_applies(img)) {
    detail::erode_fast_u8(img, se, out);
  } else {
    detail::erode_generic(img, se, out);
  }
  return out;
}

Image erode(const Image& img, const StructuringElement& se) {
  Image out(img.shape(), img.kind());
  erode(img, se, out);
  return out;
}

Image& dilate(const Image& img, const StructuringElement& se, Image& out) {
  if (fast_path_applies(img)) {
    detail::dilate_fast_u8(img, se, out);
  } else {
    detail::dilate_generic(img, se, out);
  }
  return out;
}

Image dilate(const Image& img, const StructuringElement& se) {
  Image out(img.shape(), img.kind());
  dilate(img, se, out);
  return out;
}

Image& open(const Image& img, const StructuringElement& se, Image& out) {
  check_args(img, out);
  const Image eroded = erode(img, se);
  return dilate(eroded, se, out);
}

Image open(const Image& img, const StructuringElement& se) {
  Image out(img.shape(), img.kind());
  open(img, se, out);
  return out;
}

Image& close(const Image& img, const StructuringElement& se, Image& out) {
  check_args(img, out);
  const Image dilated = dilate(img, se);
  return erode(dilated, se, out);
}

Image close(const Image& img, const StructuringElement& se) {
  Image out(img.shape(), img.kind());
  close(img, se, out);
  return out;
}

}  // namespace visionkit
