#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace visionkit {

enum class ErrorCode {
  InvalidArgument,
  NotContiguous,
  ShapeMismatch,
  KindMismatch,
  EmptyStructuringElement,
  NoMarkers,
  AllForeground,
  EvenKernel,
  NonPositiveSigma,
  DegenerateImage,
  EmptyDisk,
  ZeroImage,
  NoForeground,
  OddDimensions,
  ImageTooSmall,
  PointOutOfBounds,
  LengthMismatch,
  TooFewVertices,
  Malformed,
  UnsupportedMaxval,
  Io,
  TooFewVectors,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The message names the offending
/// argument and what was expected of it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace visionkit
