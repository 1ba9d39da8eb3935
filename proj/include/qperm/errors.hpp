#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qperm {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  NotPSD,
  ShapeMismatch,
  TooLarge,
  NotGenerating,
  InvalidTable,
  Truncated,
  InconsistentComultiplication,
  NoCounit,
  NoAntipode,
  NoHaar,
  NonUniqueHaar,
  DegenerateCentralElement,
  NotDensity,
  NotPositiveDefinite,
  NotInGroup,
  NullEvent,
  GroupMismatch,
  NotIdempotent,
  NotAState,
  ProjectionOutsideAlgebra,
  NotEquivalence,
  SyntaxError,
  IndexOutOfRange,
  InvalidSpec,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain error raised by every module. The kind is stable and machine
/// readable; the message carries the diagnostic detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qperm
