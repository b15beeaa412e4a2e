#include "miou/error.hpp"

namespace miou {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::MalformedFormat: return "MalformedFormat";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::UnwritableDestination: return "UnwritableDestination";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BothEmpty: return "BothEmpty";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::EmptyDetection: return "EmptyDetection";
    case ErrorCode::InvalidCellSize: return "InvalidCellSize";
    case ErrorCode::ScaleSetTooSmall: return "ScaleSetTooSmall";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::DegenerateRegression: return "DegenerateRegression";
    case ErrorCode::ShapeExceedsFrame: return "ShapeExceedsFrame";
  }
  return "Unknown";
}

bool is_metric_undefined(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BothEmpty:
    case ErrorCode::EmptyGroundTruth:
    case ErrorCode::EmptyDetection:
    case ErrorCode::EmptyMask:
    case ErrorCode::DegenerateRegression:
      return true;
    default:
      return false;
  }
}

}  // namespace miou
