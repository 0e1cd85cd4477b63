#include "qstates/error.hpp"

namespace qstates {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FamilyMismatch: return "family_mismatch";
    case ErrorCode::BranchCut: return "branch_cut";
    case ErrorCode::InvalidElement: return "invalid_element";
    case ErrorCode::NonIntegralParameter: return "non_integral_parameter";
    case ErrorCode::InvalidParameter: return "invalid_parameter";
    case ErrorCode::NotAState: return "not_a_state";
    case ErrorCode::NonCommuting: return "non_commuting";
    case ErrorCode::ResidualPrecondition: return "residual_precondition";
    case ErrorCode::ProbeNotInIntersection: return "probe_not_in_intersection";
    case ErrorCode::ClosureViolation: return "closure_violation";
    case ErrorCode::Unnormalized: return "unnormalized";
    case ErrorCode::NonUnitSupport: return "non_unit_support";
    case ErrorCode::GridTooCoarse: return "grid_too_coarse";
    case ErrorCode::UnknownTarget: return "unknown_target";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

}  // namespace qstates
