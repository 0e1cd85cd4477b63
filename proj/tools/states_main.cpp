// states: batch front-end over scenario files.
//
//   states verify|gram|gns|spectral|orbit|quantum --scenario FILE [options]
//   states reproduce TARGET [options]      (or --scenario FILE)
//
// Exit status: 0 all checks pass, 1 a check failed, 2 bad input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qstates/error.hpp"
#include "qstates/report_io.hpp"
#include "qstates/reproduce.hpp"
#include "qstates/scenario.hpp"

namespace {

using namespace qstates;

constexpr int kPass = 0, kCheckFailed = 1, kInputError = 2;

struct Options {
  std::string scenario;
  std::string target;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<unsigned> threads;
  std::string out;
  bool no_plots = false;
};

// Failures that are outcomes of a check rather than malformed input.
bool is_check_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAState:
    case ErrorCode::ClosureViolation:
    case ErrorCode::ResidualPrecondition:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::Unnormalized: return true;
    default: return false;
  }
}

unsigned thread_count(const Options& o) {
  if (o.threads) return std::max(1u, *o.threads);
  if (const char* env = std::getenv("STATES_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "states: ignoring STATES_THREADS='" << env << "'\n";
  }
  return 1;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Schema, "cannot read scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, "/: malformed JSON: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

void write_report(const json& report, const std::filesystem::path& dir, const std::string& stem, bool plots) {
  const auto path = dir / (stem + ".json");
  if (plots) emit_plotdata(report, dir, stem);
  write_atomic(path, dump_report(report));
  std::cout << stem << ": " << (report.value("pass", false) ? "pass" : "FAIL") << "  " << path.string() << "\n";
}

int run(Task task, const Options& o) {
  Scenario scenario;
  if (task == Task::Reproduce && o.scenario.empty()) {
    if (o.target.empty()) throw Error(ErrorCode::Schema, "reproduce: give a target or --scenario");
    scenario.task = Task::Reproduce;
    scenario.params = {{"target", o.target}};
  } else {
    if (o.scenario.empty()) throw Error(ErrorCode::Schema, "--scenario is required");
    scenario = load_scenario(o.scenario);
    if (task == Task::Reproduce && !o.target.empty()) scenario.params["target"] = o.target;
  }
  RunSettings settings;
  settings.task = task;
  settings.seed = o.seed;
  settings.budget = o.budget;
  settings.threads = thread_count(o);

  const std::filesystem::path dir = !o.out.empty() ? o.out : scenario.out.value_or(".");
  const std::string stem = report_stem(scenario);
  try {
    const TaskResult result = run_scenario(scenario, settings);
    write_report(result.report, dir, stem, !o.no_plots);
    return result.pass ? kPass : kCheckFailed;
  } catch (const Error& e) {
    if (!is_check_failure(e.code())) throw;
    json report = {{"version", scenario.version},
                   {"task", to_string(scenario.task)},
                   {"pass", false},
                   {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    write_report(report, dir, stem, false);
    return kCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive-definite functions on Lie groups: construction and verification"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool scenario_required) {
    auto* opt = sub->add_option("--scenario", o.scenario, "scenario JSON file");
    if (scenario_required) opt->required();
    sub->add_option("--seed", o.seed, "seed (overrides the scenario)");
    sub->add_option("--out", o.out, "output directory (default: scenario out, else .)");
    sub->add_option("--budget", o.budget, "orbit sample budget for quantum checks");
    sub->add_option("--threads", o.threads, "worker threads (fallback: STATES_THREADS)");
    sub->add_flag("--no-plots", o.no_plots, "skip the CSV plot data");
  };

  const std::pair<const char*, const char*> tasks[] = {
      {"verify", "Gram positivity and the three inequalities"},
      {"gram", "Gram matrix spectrum"},
      {"gns", "finite GNS space, coefficient recovery, commutant"},
      {"spectral", "spectral measure along a one- or two-parameter subgroup"},
      {"orbit", "orbit samples projected to a commuting tuple"},
      {"quantum", "sampled sup inequality over whitelisted commuting tuples"},
  };
  for (const auto& [name, help] : tasks) common(app.add_subcommand(name, help), true);
  auto* rep = app.add_subcommand("reproduce", "bundled reproduction runs");
  common(rep, false);
  std::string targets;
  for (auto t : reproduce_targets()) targets += (targets.empty() ? "" : "|") + std::string(t);
  rep->add_option("target", o.target, targets);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  const auto* sub = app.get_subcommands().front();
  const Task task = *task_from_string(sub->get_name());
  try {
    return run(task, o);
  } catch (const Error& e) {
    std::cerr << "states: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "states: " << e.what() << "\n";
    return kInputError;
  }
}
