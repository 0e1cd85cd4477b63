#pragma once

// Bundled reproduction runs. Each target evaluates a fixed list of checks
// and reports a pass/fail matrix keyed by check name and subject.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstates/json_io.hpp"
#include "qstates/prequant.hpp"
#include "qstates/states.hpp"

namespace qstates {

struct VerifyOptions {
  std::size_t sets = 20;      // random sample sets for the Gram check
  std::size_t samples = 40;   // points per set
  std::size_t pairs = 10000;  // (g, h) pairs for the inequalities
};

struct VerifyOutcome {
  PsdReport worst_psd;          // the set with the smallest normalized eigenvalue
  InequalityReport inequalities;
  bool pass = false;
};

/// Gram positivity over seeded structured sample sets and the three
/// inequalities over pairs drawn half generically, half from the state's
/// character subgroup.
VerifyOutcome verify_state(const State& m, const VerifyOptions& options, std::uint64_t seed);
json to_json(const VerifyOutcome& v);
json to_json(const InequalityReport& r);

struct ReproduceOptions {
  std::uint64_t seed = 1;
  std::size_t budget = 100000;
  std::size_t trials = 1000;
  unsigned threads = 1;
  std::optional<PrequantScenario> prequant;  // default: standard Gaussian
};

struct CheckRow {
  std::string check;
  std::string subject;
  bool pass = false;
  json detail;
};

struct ReproduceReport {
  std::string target;
  std::vector<CheckRow> rows;
  json plots = json::object();

  bool pass() const;
  /// {"target", "pass", "matrix": {check: {subject: bool}}, "checks": [...], "plots"}.
  json to_json() const;
};

std::span<const std::string_view> reproduce_targets();

/// Throws Error{UnknownTarget}.
ReproduceReport reproduce(std::string_view target, const ReproduceOptions& options = {});

}  // namespace qstates
