#pragma once

#include "visionkit/image.hpp"
#include "visionkit/structuring_element.hpp"

namespace visionkit {

/// Seeded watershed by priority flood.
///
/// `markers` is an I32 label image (0 = unlabeled) with the shape of
/// `surface`. Pixels are flooded in order of (surface value, enqueue order);
/// a pixel takes the label of the neighbor that first enqueued it. Neighbors
/// are the structuring element's offsets that land inside the image. Every
/// pixel reachable from a marker is labeled; no watershed lines are drawn.
///
/// Throws ShapeMismatch, NoMarkers, KindMismatch (markers not I32) or
/// InvalidArgument (NaN in a float surface, negative marker).
Image cwatershed(const Image& surface, const Image& markers,
                 const StructuringElement& se = make_cross_3x3());

/// Squared Euclidean distance from every pixel to the nearest zero pixel,
/// exact, via the lower envelope of parabolas applied along rows and then
/// columns. Returns I32 when both dimensions are at most 2^15, F64 otherwise.
/// Throws AllForeground when the image has no zero pixel.
Image distance_squared(const Image& binary);

}  // namespace visionkit
