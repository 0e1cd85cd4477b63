#include "qstates/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "qstates/error.hpp"
#include "qstates/gns.hpp"
#include "qstates/orbits.hpp"
#include "qstates/report_io.hpp"
#include "qstates/reproduce.hpp"
#include "qstates/spectral.hpp"

namespace qstates {

namespace {

constexpr std::array<std::pair<Task, std::string_view>, 7> kTaskNames{{{Task::Verify, "verify"},
                                                                       {Task::Gram, "gram"},
                                                                       {Task::Gns, "gns"},
                                                                       {Task::Spectral, "spectral"},
                                                                       {Task::OrbitProject, "orbit_project"},
                                                                       {Task::QuantumCheck, "quantum_check"},
                                                                       {Task::Reproduce, "reproduce"}}};

void reject_unknown_keys(const json& j, const std::string& pointer, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_error(pointer + "/" + key, "unknown key");
    }
  }
}

std::size_t count_param(const json& j, const std::string& key, std::size_t fallback, const std::string& pointer,
                        std::size_t minimum = 1) {
  const double v = optional_number(j, key, static_cast<double>(fallback), pointer);
  if (!(v >= static_cast<double>(minimum)) || v != std::floor(v) || v > 1e12) {
    schema_error(pointer + "/" + key, "expected an integer >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

std::vector<GroupElement> group_list(const json& j, const std::string& pointer) {
  if (!j.is_array()) schema_error(pointer, "expected an array of group elements");
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(group_element_from_json(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

std::vector<AlgebraElement> algebra_list(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) schema_error(pointer, "expected a nonempty array of algebra elements");
  std::vector<AlgebraElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(algebra_element_from_json(j[i], pointer + "/" + std::to_string(i)));
  }
  return out;
}

void require_family(Family expected, Family got, const std::string& pointer) {
  if (expected != got) {
    schema_error(pointer, "family " + std::string(to_string(got)) + " does not match the state's " +
                              std::string(to_string(expected)));
  }
}

OrbitSpec orbit_from_json(const json& j, const std::string& pointer) {
  reject_unknown_keys(j, pointer, {"family", "k", "ell", "s", "lambda", "box_radius"});
  if (!j.contains("family") || !j["family"].is_string()) schema_error(pointer + "/family", "missing family string");
  OrbitSpec spec;
  try {
    const Family f = family_from_string(j["family"].get<std::string>());
    switch (f) {
      case Family::Heisenberg:
        spec = heisenberg_orbit(optional_number(j, "k", 1.0, pointer), optional_number(j, "ell", 0.0, pointer));
        break;
      case Family::Bargmann:
        spec = bargmann_orbit(optional_number(j, "k", 0.0, pointer), optional_number(j, "ell", 0.0, pointer));
        break;
      case Family::Euclid:
        spec = euclid_orbit(optional_number(j, "k", 1.0, pointer), optional_number(j, "s", 0.0, pointer));
        break;
      case Family::SU2: spec = su2_orbit(optional_number(j, "lambda", 1.0, pointer)); break;
      case Family::Torus: schema_error(pointer + "/family", "no orbit chart for the torus");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema_error(pointer, e.what());
  }
  spec.box_radius = optional_number(j, "box_radius", spec.box_radius, pointer);
  if (!(spec.box_radius > 0)) schema_error(pointer + "/box_radius", "must be positive");
  return spec;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json base_report(const Scenario& s, std::uint64_t seed, std::vector<std::string> refs) {
  json r = {{"version", s.version}, {"task", to_string(s.task)}, {"refs", std::move(refs)}};
  if (s.seed || is_stochastic(s.task, s.params)) r["seed"] = seed;
  if (!s.state.is_null()) r["state"] = s.state;
  r["params"] = s.params;
  return r;
}

// ---------------------------------------------------------------- tasks

TaskResult run_verify(const Scenario& s, const State& m, std::uint64_t seed) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"sets", "samples", "pairs"});
  VerifyOptions o;
  o.sets = count_param(s.params, "sets", o.sets, ptr);
  o.samples = count_param(s.params, "samples", o.samples, ptr);
  o.pairs = count_param(s.params, "pairs", o.pairs, ptr);
  const VerifyOutcome v = verify_state(m, o, seed);
  json r = base_report(s, seed, {"gram positivity", "herglotz inequality", "krein inequality", "weil inequality"});
  r["result"] = to_json(v);
  r["pass"] = v.pass;
  return {r, v.pass};
}

std::vector<GroupElement> sample_list(const Scenario& s, const State& m, std::uint64_t seed, bool identity_first) {
  const std::string ptr = "/params";
  std::vector<GroupElement> samples;
  if (s.params.contains("elements")) {
    samples = group_list(s.params["elements"], ptr + "/elements");
    if (samples.empty()) schema_error(ptr + "/elements", "expected at least one element");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      require_family(m.family(), samples[i].family(), ptr + "/elements/" + std::to_string(i));
    }
  } else {
    const std::size_t n = count_param(s.params, "samples", 16, ptr);
    Rng rng(seed);
    samples = structured_samples(m, identity_first ? n - 1 : n, rng);
  }
  if (identity_first && (samples.empty() || !is_identity(samples.front(), 1e-12))) {
    samples.insert(samples.begin(), GroupElement::identity(m.family(), m.torus_dim()));
  }
  return samples;
}

TaskResult run_gram(const Scenario& s, const State& m, std::uint64_t seed) {
  reject_unknown_keys(s.params, "/params", {"samples", "elements"});
  const auto samples = sample_list(s, m, seed, false);
  const GramMatrix gm = gram(m, samples);
  const PsdReport psd = check_psd(gm);
  std::vector<double> eig(gm.eigenvalues.data(), gm.eigenvalues.data() + gm.eigenvalues.size());
  json r = base_report(s, seed, {"gram positivity"});
  r["result"] = {{"size", gm.size()},
                 {"rank", gm.rank(kDefaultTolerances.psd_per_sample)},
                 {"eigenvalues", eig},
                 {"min_eigenvalue", psd.min_eigenvalue},
                 {"threshold", psd.threshold},
                 {"hermitian_defect", gm.hermitian_defect()}};
  r["pass"] = psd.pass;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < eig.size(); ++i) rows.push_back({static_cast<double>(i), eig[i]});
  r["plots"] = {{"eigenvalues", plot_table({"index", "eigenvalue"}, rows)}};
  return {r, psd.pass};
}

TaskResult run_gns(const Scenario& s, const State& m, std::uint64_t seed) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"samples", "elements", "probes"});
  const auto samples = sample_list(s, m, seed, true);
  std::vector<GroupElement> probes = samples;
  if (s.params.contains("probes")) {
    probes = group_list(s.params["probes"], ptr + "/probes");
    for (std::size_t i = 0; i < probes.size(); ++i) {
      require_family(m.family(), probes[i].family(), ptr + "/probes/" + std::to_string(i));
    }
  }
  const GnsSpace space = build_gns(m, samples);
  const Tolerances tol = kDefaultTolerances;
  json residuals = json::array(), recovery = json::array();
  bool pass = true, all_closed = true;
  double worst_recovery = 0, worst_unitarity = 0;
  for (const auto& g : probes) {
    const RepMatrix pi = rep_matrix(space, g);
    residuals.push_back(pi.residual);
    if (pi.residual > tol.rep_residual) {
      all_closed = false;
      recovery.push_back(nullptr);
      continue;
    }
    const double err = std::abs(recovered_coefficient(space, pi) - m(g));
    const auto r = static_cast<Eigen::Index>(space.rank);
    const double unitarity = (pi.matrix.adjoint() * pi.matrix - Eigen::MatrixXcd::Identity(r, r)).norm();
    recovery.push_back(err);
    worst_recovery = std::max(worst_recovery, err);
    worst_unitarity = std::max(worst_unitarity, unitarity);
    pass = pass && err <= 1e-9 && unitarity <= 1e-9;
  }
  const CommutantPolicy policy = all_closed ? CommutantPolicy::Strict : CommutantPolicy::Compressed;
  const CommutantReport comm = commutant_dim(space, probes, policy, tol);
  std::vector<double> eig(space.gram.eigenvalues.data(), space.gram.eigenvalues.data() + space.gram.eigenvalues.size());
  json r = base_report(s, seed, {"gns construction", "coefficient recovery", "commutant dimension"});
  r["result"] = {{"rank", space.rank},
                 {"eigenvalues", eig},
                 {"residuals", residuals},
                 {"recovery_errors", recovery},
                 {"max_recovery_error", worst_recovery},
                 {"max_unitarity_defect", worst_unitarity},
                 {"commutant_dim", comm.dimension},
                 {"commutant_policy", to_string(comm.policy)}};
  r["pass"] = pass;
  return {r, pass};
}

FrequencySet frequency_set_from_json(const json& j, const std::string& pointer) {
  if (j.is_string()) {
    if (j.get<std::string>() == "everything") return FrequencySet::everything();
    schema_error(pointer, "expected \"everything\" or an object");
  }
  reject_unknown_keys(j, pointer, {"interval", "points"});
  if (j.size() != 1) schema_error(pointer, "expected exactly one of interval, points");
  if (j.contains("interval")) {
    const json& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      schema_error(pointer + "/interval", "expected [lo, hi]");
    }
    const double lo = iv[0].get<double>(), hi = iv[1].get<double>();
    if (!(lo <= hi)) schema_error(pointer + "/interval", "lo must not exceed hi");
    return FrequencySet::interval(lo, hi);
  }
  const json& pts = j["points"];
  if (!pts.is_array()) schema_error(pointer + "/points", "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_number()) schema_error(pointer + "/points/" + std::to_string(i), "expected a number");
    out.push_back(pts[i].get<double>());
  }
  return FrequencySet::finite(std::move(out));
}

json estimate_json(const SpectralEstimate& e) {
  json atoms = json::array();
  for (const auto& a : e.atoms) {
    atoms.push_back({{"frequency", a.frequency}, {"mass", a.mass}, {"imag_residue", a.imag_residue}});
  }
  return {{"classification", to_string(e.classification)},
          {"atoms", atoms},
          {"atom_mass", e.atom_mass},
          {"density_mass", e.density_mass},
          {"total_mass_accounted", e.total_mass_accounted},
          {"leakage_bound", e.leakage_bound},
          {"T", e.T},
          {"N", e.N}};
}

TaskResult run_spectral(const Scenario& s, const State& m, std::uint64_t seed) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"Z", "Z2", "T", "N", "density", "set"});
  if (!s.params.contains("Z")) schema_error(ptr + "/Z", "missing algebra element");
  const AlgebraElement Z = algebra_element_from_json(s.params["Z"], ptr + "/Z");
  require_family(m.family(), Z.family, ptr + "/Z/family");
  SpectralOptions o = options_for(Z);
  o.T = optional_number(s.params, "T", o.T, ptr);
  o.N = count_param(s.params, "N", o.N, ptr, 4096);
  if (o.N % 2) schema_error(ptr + "/N", "must be even");
  if (!(o.T >= 100)) schema_error(ptr + "/T", "must be at least 100");
  if (s.params.contains("density")) {
    if (!s.params["density"].is_boolean()) schema_error(ptr + "/density", "expected a boolean");
    o.estimate_density = s.params["density"].get<bool>();
  }
  std::optional<FrequencySet> set;
  if (s.params.contains("set")) set = frequency_set_from_json(s.params["set"], ptr + "/set");

  json r = base_report(s, seed, {"spectral measure", "bohr mean atoms", "concentration on orbit projection"});
  bool pass = true;
  if (s.params.contains("Z2")) {
    const AlgebraElement Z2 = algebra_element_from_json(s.params["Z2"], ptr + "/Z2");
    require_family(m.family(), Z2.family, ptr + "/Z2/family");
    SpectralOptions2 o2;
    o2.line = o;
    o2.seed = seed;
    const SpectralEstimate2 e = spectral_estimate_2d(m, Z, Z2, o2);
    json atoms = json::array();
    for (const auto& a : e.atoms) atoms.push_back({{"frequency", {a.frequency[0], a.frequency[1]}}, {"mass", a.mass}});
    r["result"] = {{"classification", to_string(e.classification)},
                   {"axis", {estimate_json(e.axis[0]), estimate_json(e.axis[1])}},
                   {"atoms", atoms},
                   {"consistent", e.consistent}};
    pass = e.consistent;
    if (set) {
      const auto c0 = concentration_check(e.axis[0], *set), c1 = concentration_check(e.axis[1], *set);
      r["result"]["concentration"] = {{{"mass_outside", c0.mass_outside}, {"allowed", c0.allowed}, {"pass", c0.pass}},
                                      {{"mass_outside", c1.mass_outside}, {"allowed", c1.allowed}, {"pass", c1.pass}}};
      pass = pass && c0.pass && c1.pass;
    }
  } else {
    const SpectralEstimate e = spectral_estimate(m, Z, o);
    r["result"] = estimate_json(e);
    if (set) {
      const auto c = concentration_check(e, *set);
      r["result"]["concentration"] = {{"mass_outside", c.mass_outside}, {"allowed", c.allowed}, {"pass", c.pass}};
      pass = c.pass;
    }
    json plots = json::object();
    std::vector<std::vector<double>> atom_rows;
    for (const auto& a : e.atoms) atom_rows.push_back({a.frequency, a.mass});
    plots["atoms"] = plot_table({"omega", "mass"}, atom_rows);
    if (e.density) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < e.density->frequency.size(); ++i) {
        rows.push_back({e.density->frequency[i], e.density->value[i]});
      }
      plots["density"] = plot_table({"omega", "density"}, rows);
    }
    r["plots"] = plots;
  }
  r["pass"] = pass;
  return {r, pass};
}

TaskResult run_orbit(const Scenario& s, const State& m, std::uint64_t seed) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"orbit", "Zs", "samples"});
  const OrbitSpec spec = s.params.contains("orbit") ? orbit_from_json(s.params["orbit"], ptr + "/orbit") : orbit_for(m);
  require_family(m.family(), spec.family, ptr + "/orbit/family");
  if (!s.params.contains("Zs")) schema_error(ptr + "/Zs", "missing algebra elements");
  const auto Zs = algebra_list(s.params["Zs"], ptr + "/Zs");
  for (std::size_t i = 0; i < Zs.size(); ++i) {
    require_family(m.family(), Zs[i].family, ptr + "/Zs/" + std::to_string(i) + "/family");
  }
  if (!commuting(Zs)) schema_error(ptr + "/Zs", "elements do not commute");
  const std::size_t count = count_param(s.params, "samples", 10000, ptr, 1000);
  const OrbitSamples samples = sample_orbit(spec, count, seed);

  const std::size_t dual = samples.dual.size();
  double worst_defect = 0;
  std::vector<double> lo(Zs.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(Zs.size(), -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> rows;
  CoadjointVector w{spec.family, Eigen::VectorXd(static_cast<Eigen::Index>(dual))};
  for (std::size_t i = 0; i < samples.count; ++i) {
    for (std::size_t d = 0; d < dual; ++d) w.coords[static_cast<Eigen::Index>(d)] = samples.dual[d][i];
    worst_defect = std::max(worst_defect, spec.relation_defect(w));
    const auto proj = project(w, Zs);
    for (std::size_t k = 0; k < proj.size(); ++k) {
      lo[k] = std::min(lo[k], proj[k]);
      hi[k] = std::max(hi[k], proj[k]);
    }
    if (rows.size() < 2000) {
      std::vector<double> row{static_cast<double>(i)};
      row.insert(row.end(), proj.begin(), proj.end());
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::string> columns{"sample"};
  for (std::size_t k = 0; k < Zs.size(); ++k) columns.push_back("projection_" + std::to_string(k + 1));

  const bool pass = worst_defect <= kDefaultTolerances.orbit_relation;
  json r = base_report(s, seed, {"moment map", "orbit projection"});
  json ranges = json::array();
  for (std::size_t k = 0; k < Zs.size(); ++k) ranges.push_back({lo[k], hi[k]});
  r["result"] = {{"samples", samples.count}, {"max_relation_defect", worst_defect}, {"projection_ranges", ranges}};
  r["pass"] = pass;
  r["plots"] = {{"projections", plot_table(columns, rows)}};
  return {r, pass};
}

TaskResult run_quantum(const Scenario& s, const State& m, std::uint64_t seed, const RunSettings& settings) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"orbit", "trials", "n_max", "budget"});
  const OrbitSpec spec = s.params.contains("orbit") ? orbit_from_json(s.params["orbit"], ptr + "/orbit") : orbit_for(m);
  require_family(m.family(), spec.family, ptr + "/orbit/family");
  QuantumCheckOptions o;
  o.trials = count_param(s.params, "trials", o.trials, ptr);
  o.n_max = count_param(s.params, "n_max", o.n_max, ptr);
  o.budget = settings.budget.value_or(count_param(s.params, "budget", o.budget, ptr, 1000));
  if (o.budget < 1000) schema_error("--budget", "must be at least 1000");
  o.seed = seed;
  o.threads = settings.threads;
  const QuantumReport q = quantum_check(m, spec, o);

  json failures = json::array();
  for (const auto& t : q.failures) {
    json zs = json::array(), cs = json::array();
    for (const auto& Z : t.Zs) zs.push_back(to_json(Z));
    for (const auto& c : t.cs) cs.push_back(complex_json(c));
    failures.push_back({{"trial", t.index},
                        {"tuple_family", to_string(t.tuple_family)},
                        {"Zs", zs},
                        {"cs", cs},
                        {"lhs", t.lhs},
                        {"rhs", t.rhs}});
  }
  std::vector<double> margins;
  for (const auto& t : q.per_trial) margins.push_back(t.margin);
  json r = base_report(s, seed, {"quantum state sup inequality"});
  r["result"] = {{"trials", q.trials},
                 {"worst_margin", q.worst_margin},
                 {"slack", q.slack},
                 {"budget", o.budget},
                 {"failures", failures}};
  r["pass"] = q.pass;
  r["plots"] = {{"margins", plot_histogram(margins, 20)}};
  return {r, q.pass};
}

PrequantScenario prequant_from_json(const json& j, const std::string& pointer) {
  reject_unknown_keys(j, pointer, {"center", "covariance", "extent", "resolution"});
  PrequantScenario p;
  if (j.contains("center")) {
    const json& c = j["center"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      schema_error(pointer + "/center", "expected [p, k]");
    }
    p.center = {c[0].get<double>(), c[1].get<double>()};
  }
  if (j.contains("covariance")) {
    const json& c = j["covariance"];
    if (!c.is_array() || c.size() != 2) schema_error(pointer + "/covariance", "expected a 2x2 array");
    for (int r = 0; r < 2; ++r) {
      if (!c[r].is_array() || c[r].size() != 2 || !c[r][0].is_number() || !c[r][1].is_number()) {
        schema_error(pointer + "/covariance/" + std::to_string(r), "expected two numbers");
      }
      p.covariance(r, 0) = c[r][0].get<double>();
      p.covariance(r, 1) = c[r][1].get<double>();
    }
    if (p.covariance(0, 1) != p.covariance(1, 0) || !(p.covariance.determinant() > 0) || !(p.covariance(0, 0) > 0)) {
      schema_error(pointer + "/covariance", "must be symmetric positive definite");
    }
  }
  p.extent = optional_number(j, "extent", p.extent, pointer);
  if (!(p.extent > 0)) schema_error(pointer + "/extent", "must be positive");
  p.resolution = count_param(j, "resolution", p.resolution, pointer, 16);
  return p;
}

TaskResult run_reproduce(const Scenario& s, std::uint64_t seed, const RunSettings& settings) {
  const std::string ptr = "/params";
  reject_unknown_keys(s.params, ptr, {"target", "trials", "budget", "prequant"});
  if (!s.params.contains("target") || !s.params["target"].is_string()) {
    schema_error(ptr + "/target", "missing target string");
  }
  const std::string target = s.params["target"].get<std::string>();
  const auto targets = reproduce_targets();
  if (std::find(targets.begin(), targets.end(), target) == targets.end()) {
    throw Error(ErrorCode::UnknownTarget, ptr + "/target: unknown target '" + target + "'");
  }
  ReproduceOptions o;
  o.seed = seed;
  o.trials = count_param(s.params, "trials", o.trials, ptr);
  o.budget = settings.budget.value_or(count_param(s.params, "budget", o.budget, ptr, 1000));
  if (o.budget < 1000) schema_error("--budget", "must be at least 1000");
  o.threads = settings.threads;
  if (s.params.contains("prequant")) o.prequant = prequant_from_json(s.params["prequant"], ptr + "/prequant");

  const ReproduceReport rep = reproduce(target, o);
  std::vector<std::string> refs;
  std::set<std::string> seen;
  for (const auto& row : rep.rows) {
    if (seen.insert(row.check).second) refs.push_back(row.check);
  }
  json r = base_report(s, seed, refs);
  json body = rep.to_json();
  r["plots"] = body["plots"];
  body.erase("plots");
  r["result"] = body;
  r["pass"] = rep.pass();
  return {r, rep.pass()};
}

}  // namespace

std::string_view to_string(Task t) noexcept {
  for (const auto& [task, name] : kTaskNames) {
    if (task == t) return name;
  }
  return "unknown";
}

std::optional<Task> task_from_string(std::string_view name) noexcept {
  if (name == "orbit") return Task::OrbitProject;
  if (name == "quantum") return Task::QuantumCheck;
  for (const auto& [task, n] : kTaskNames) {
    if (n == name) return task;
  }
  return std::nullopt;
}

bool is_stochastic(Task t, const json& params) noexcept {
  switch (t) {
    case Task::Verify:
    case Task::Gns:
    case Task::OrbitProject:
    case Task::QuantumCheck: return true;
    case Task::Gram: return !params.contains("elements");
    case Task::Spectral: return params.contains("Z2");
    case Task::Reproduce: return false;
  }
  return true;
}

State state_from_json(const json& j, const std::string& pointer) {
  reject_unknown_keys(j, pointer, {"kind", "family", "k", "s", "ell", "t", "j", "epsilon"});
  if (!j.contains("kind") || !j["kind"].is_string()) schema_error(pointer + "/kind", "missing state kind string");
  const std::string kind_name = j["kind"].get<std::string>();
  StateKind kind;
  try {
    kind = state_kind_from_string(kind_name);
  } catch (const Error&) {
    schema_error(pointer + "/kind", "unknown state kind '" + kind_name + "'");
  }
  if (kind == StateKind::Custom) schema_error(pointer + "/kind", "custom states cannot be built from a scenario");
  StateParams p;
  p.k = optional_number(j, "k", p.k, pointer);
  p.s = optional_number(j, "s", p.s, pointer);
  p.ell = optional_number(j, "ell", p.ell, pointer);
  p.t = optional_number(j, "t", p.t, pointer);
  p.j = optional_number(j, "j", p.j, pointer);
  const double eps = optional_number(j, "epsilon", 0.0, pointer);
  if (eps != 0.0 && eps != 1.0) schema_error(pointer + "/epsilon", "expected 0 or 1");
  p.epsilon = static_cast<int>(eps);

  Family family = Family::Heisenberg;
  if (kind == StateKind::ConstantOne) {
    if (!j.contains("family") || !j["family"].is_string()) {
      schema_error(pointer + "/family", "constant_one needs a family");
    }
    try {
      family = family_from_string(j["family"].get<std::string>());
    } catch (const Error&) {
      schema_error(pointer + "/family", "unknown family '" + j["family"].get<std::string>() + "'");
    }
  } else if (j.contains("family")) {
    schema_error(pointer + "/family", "only constant_one takes a family");
  }
  try {
    return make_state(kind, p, family);
  } catch (const Error& e) {
    schema_error(pointer, e.what());
  }
}

Scenario parse_scenario(const json& j) {
  reject_unknown_keys(j, "", {"version", "task", "seed", "state", "params", "out"});
  Scenario s;
  if (!j.contains("version")) schema_error("/version", "missing version");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) schema_error("/version", "expected 1");
  if (!j.contains("task") || !j["task"].is_string()) schema_error("/task", "missing task string");
  const auto task = task_from_string(j["task"].get<std::string>());
  if (!task) schema_error("/task", "unknown task '" + j["task"].get<std::string>() + "'");
  s.task = *task;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) schema_error("/seed", "expected a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) schema_error("/params", "expected an object");
    s.params = j["params"];
  }
  if (s.task == Task::Reproduce) {
    if (j.contains("state")) schema_error("/state", "reproduce takes no state");
  } else {
    if (!j.contains("state")) schema_error("/state", "missing state");
    s.state = j["state"];
    (void)state_from_json(s.state, "/state");
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) schema_error("/out", "expected a string");
    s.out = j["out"].get<std::string>();
  }
  return s;
}

std::string report_stem(const Scenario& s) {
  std::string stem(to_string(s.task));
  if (s.task == Task::Reproduce && s.params.contains("target") && s.params["target"].is_string()) {
    stem += "_" + s.params["target"].get<std::string>();
  }
  return stem;
}

TaskResult run_scenario(const Scenario& s, const RunSettings& settings) {
  if (settings.task && *settings.task != s.task) {
    schema_error("/task", "scenario task '" + std::string(to_string(s.task)) + "' does not match subcommand '" +
                              std::string(to_string(*settings.task)) + "'");
  }
  const std::optional<std::uint64_t> seed = settings.seed ? settings.seed : s.seed;
  if (!seed && is_stochastic(s.task, s.params)) schema_error("/seed", "required for task " + std::string(to_string(s.task)));
  const std::uint64_t use_seed = seed.value_or(1);
  if (s.task == Task::Reproduce) return run_reproduce(s, use_seed, settings);

  const State m = state_from_json(s.state, "/state");
  switch (s.task) {
    case Task::Verify: return run_verify(s, m, use_seed);
    case Task::Gram: return run_gram(s, m, use_seed);
    case Task::Gns: return run_gns(s, m, use_seed);
    case Task::Spectral: return run_spectral(s, m, use_seed);
    case Task::OrbitProject: return run_orbit(s, m, use_seed);
    case Task::QuantumCheck: return run_quantum(s, m, use_seed, settings);
    case Task::Reproduce: break;
  }
  return run_reproduce(s, use_seed, settings);
}

}  // namespace qstates
