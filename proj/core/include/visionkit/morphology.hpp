#pragma once

#include "visionkit/image.hpp"
#include "visionkit/structuring_element.hpp"

namespace visionkit {

// Grayscale morphology with ExtendNearest borders. With flat elements and
// 0/1 images these reduce to binary erosion and dilation.
//
//   erode(p)  = min_j  (img[p + offset_j] - weight_j)
//   dilate(p) = max_j  (img[p - offset_j] + weight_j)
//
// Integer arithmetic saturates at the scalar kind's limits. Weights are
// truncated toward zero for integer kinds. Dilation uses the reflected
// element so that opening and closing are idempotent.
//
// The `out` forms require a contiguous output of the input's shape and kind;
// `out` may alias `img`.

Image& erode(const Image& img, const StructuringElement& se, Image& out);
Image erode(const Image& img, const StructuringElement& se = make_cross_3x3());

Image& dilate(const Image& img, const StructuringElement& se, Image& out);
Image dilate(const Image& img, const StructuringElement& se = make_cross_3x3());

Image& open(const Image& img, const StructuringElement& se, Image& out);
Image open(const Image& img, const StructuringElement& se = make_cross_3x3());

Image& close(const Image& img, const StructuringElement& se, Image& out);
Image close(const Image& img, const StructuringElement& se = make_cross_3x3());

namespace detail {

// The two kernels behind erode/dilate. The public functions pick the
// row-sweep kernel for contiguous U8 inputs and the cursor-based kernel
// otherwise; both are exposed so their outputs can be compared.
void erode_generic(const Image& img, const StructuringElement& se, Image& out);
void dilate_generic(const Image& img, const StructuringElement& se, Image& out);
void erode_fast_u8(const Image& img, const StructuringElement& se, Image& out);
void dilate_fast_u8(const Image& img, const StructuringElement& se, Image& out);

}  // namespace detail

}  // namespace visionkit
