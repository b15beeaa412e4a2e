#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace miou {

// Numeric values are mirrored by the miou_status enum in miou.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  UnreadableFile = 2,
  MalformedFormat = 3,
  UnsupportedEncoding = 4,
  UnwritableDestination = 5,
  DimensionMismatch = 6,
  BothEmpty = 7,
  EmptyGroundTruth = 8,
  EmptyDetection = 9,
  InvalidCellSize = 10,
  ScaleSetTooSmall = 11,
  EmptyMask = 12,
  DegenerateRegression = 13,
  ShapeExceedsFrame = 14,
};

std::string_view to_string(ErrorCode code) noexcept;

// True for errors that mean "the metric is undefined for this input" rather
// than "the input could not be read or is invalid".
bool is_metric_undefined(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace miou
