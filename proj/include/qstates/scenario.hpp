#pragma once

// Scenario files: one task on one state.
//
//   {"version": 1, "task": "quantum_check", "seed": 11,
//    "state": {"kind": "euclid_spherical", "k": 1.0},
//    "params": {"trials": 1000, "n_max": 3, "budget": 100000},
//    "out": "reports"}
//
// Tasks: verify, gram, gns, spectral, orbit_project, quantum_check,
// reproduce. Unknown keys are rejected. Every schema problem is an
// Error{Schema} whose message starts with the JSON pointer of the value.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qstates/json_io.hpp"
#include "qstates/states.hpp"

namespace qstates {

enum class Task { Verify, Gram, Gns, Spectral, OrbitProject, QuantumCheck, Reproduce };
std::string_view to_string(Task t) noexcept;
/// Accepts the scenario names and the CLI subcommand names (orbit, quantum).
std::optional<Task> task_from_string(std::string_view name) noexcept;
/// Tasks that draw random samples and therefore need a seed.
bool is_stochastic(Task t, const json& params) noexcept;

struct Scenario {
  int version = 1;
  Task task = Task::Verify;
  json state;                          // null for reproduce
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

Scenario parse_scenario(const json& j);
State state_from_json(const json& j, const std::string& pointer);

struct RunSettings {
  std::optional<Task> task;            // subcommand; must agree with the file
  std::optional<std::uint64_t> seed;   // overrides the file
  std::optional<std::size_t> budget;   // overrides params.budget
  unsigned threads = 1;
};

struct TaskResult {
  json report;
  bool pass = false;
};

/// Validates the task parameters (Error{Schema}) and runs the task.
TaskResult run_scenario(const Scenario& scenario, const RunSettings& settings);

/// File stem for the report and its CSV companions.
std::string report_stem(const Scenario& scenario);

}  // namespace qstates
