#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qstates {

enum class ErrorCode {
  FamilyMismatch,
  BranchCut,
  InvalidElement,
  NonIntegralParameter,
  InvalidParameter,
  NotAState,
  NonCommuting,
  ResidualPrecondition,
  ProbeNotInIntersection,
  ClosureViolation,
  Unnormalized,
  NonUnitSupport,
  GridTooCoarse,
  UnknownTarget,
  Schema,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so the
/// CLI can map it to an exit status and a report entry.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qstates
