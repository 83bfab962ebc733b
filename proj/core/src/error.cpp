#include "roadrand/error.hpp"

namespace roadrand {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidPose: return "invalid-pose";
    case ErrorCode::kNotVisible: return "not-visible";
    case ErrorCode::kNoGroundIntersection: return "no-ground-intersection";
    case ErrorCode::kUnknownClass: return "unknown-class";
    case ErrorCode::kParameterOutOfRange: return "parameter-out-of-range";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kUnusableScene: return "unusable-scene";
    case ErrorCode::kDegenerateClass: return "degenerate-class";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kInvalidTarget: return "invalid-target";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidConfig: return "invalid-config";
  }
  return "unknown";
}

}  // namespace roadrand
