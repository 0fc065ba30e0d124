#include "multitile/error.hpp"

namespace multitile {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::NotATiling: return "NotATiling";
    case ErrorCode::InconsistentK: return "InconsistentK";
    case ErrorCode::DuplicateOffset: return "DuplicateOffset";
    case ErrorCode::PointOnGap: return "PointOnGap";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoPairFound: return "NoPairFound";
    case ErrorCode::NonUniformShifts: return "NonUniformShifts";
    case ErrorCode::SingularCell: return "SingularCell";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
  }
  return "Unknown";
}

bool is_mathematical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoPairFound:
    case ErrorCode::SingularCell:
    case ErrorCode::DuplicateNodes:
    case ErrorCode::SingularMatrix:
      return true;
    default:
      return false;
  }
}

}  // namespace multitile
