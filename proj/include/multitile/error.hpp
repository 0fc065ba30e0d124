#pragma once

#include <stdexcept>
#include <string>

namespace multitile {

enum class ErrorCode {
  InvalidInput,
  SingularBasis,
  NotATiling,
  InconsistentK,
  DuplicateOffset,
  PointOnGap,
  OutOfDomain,
  NoPairFound,
  NonUniformShifts,
  SingularCell,
  DuplicateNodes,
  DimensionMismatch,
  SingularMatrix,
};

const char* to_string(ErrorCode code);

/// True for failures of the mathematics (no certificate, singular systems)
/// as opposed to malformed input. The CLI maps these to exit code 2.
bool is_mathematical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace multitile
