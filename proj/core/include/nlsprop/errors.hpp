#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlsprop {

enum class ErrorKind {
  DomainError,
  InvalidArgument,
  NonConvergence,
  MeshOverflow,
  StepSizeUnderflow,
  SpanMismatch,
  NoSignChange,
  MaxEvaluations,
  NotGroundState,
  SectorMismatch,
  WrongBranch,
  IllConditionedFit,
  Uncertified,
  MonotonicityViolated,
  NearSingularOperator,
  UnknownSector,
  IndexExceedsDirections,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the toolkit carries a kind so callers (sweeps, the
// CLI report) can record it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nlsprop
