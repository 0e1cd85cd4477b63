// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qstates/gns.hpp"
#include "qstates/induced.hpp"
#include "qstates/orbits.hpp"
#include "qstates/prequant.hpp"
#include "qstates/quadrature.hpp"
#include "qstates/spectral.hpp"
#include "qstates/states.hpp"

using namespace qstates;

namespace {

constexpr double kPi = std::numbers::pi;
// Brute-force value of the standard Gaussian leak, fixed before the build
// (adaptive quadrature of the conditional-normal integral, split at cos p = 0).
constexpr double kPrequantReference = 0.29669801614158064;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<State> built_in_states() {
  std::vector<State> out;
  StateParams p;
  p.k = 1.3, p.ell = -0.7, p.t = 0.6;
  for (StateKind k : {StateKind::HeisenbergLocP, StateKind::HeisenbergLocQ, StateKind::HeisenbergLocT,
                      StateKind::HeisenbergCenter, StateKind::BargmannLocPE, StateKind::BargmannLocQ,
                      StateKind::EuclidSpherical}) {
    out.push_back(make_state(k, p));
  }
  StateParams plane = p;
  plane.s = 1;
  out.push_back(make_state(StateKind::EuclidPlane, plane));
  for (int eps : {0, 1}) {
    StateParams cyl = p;
    cyl.epsilon = eps;
    out.push_back(make_state(StateKind::EuclidCylindrical, cyl));
  }
  for (double j : {0.5, 1.0, 2.5, 4.0}) out.push_back(su2_highest_weight(j));
  for (Family f : {Family::Heisenberg, Family::Bargmann, Family::Euclid, Family::SU2}) out.push_back(constant_one(f));
  return out;
}

GroupElement mixed(const State& m, Rng& rng, std::size_t i) {
  if (i % 2 == 0) return random_group_element(m.family(), rng, 3.0);
  GroupElement h = m.sample_character_subgroup(rng);
  if (m.family() == Family::Euclid && i % 4 == 3) {
    h = compose(h, GroupElement(make_euclid(Mat3::Identity(), Vec3(uniform(rng, -4, 4), uniform(rng, -4, 4),
                                                                       uniform(rng, -4, 4)))));
  }
  return h;
}

// ---------------------------------------------------------------- criteria

Outcome positivity() {
  Rng rng(101);
  double worst = INFINITY;
  std::size_t sets = 0;
  for (const State& m : built_in_states()) {
    for (int s = 0; s < 200; ++s) {
      const std::size_t n = 2 + rng() % 39;
      const GramMatrix g = gram(m, structured_samples(m, n, rng));
      worst = std::min(worst, g.min_eigenvalue() / static_cast<double>(n));
      ++sets;
    }
  }
  return {worst >= -1e-9, std::to_string(sets) + " sets, worst min eigenvalue / n = " + fmt("%.3e", worst)};
}

Outcome inequalities() {
  Rng rng(102);
  double worst = INFINITY;
  bool pass = true;
  std::size_t states = 0;
  for (const State& m : built_in_states()) {
    std::vector<std::pair<GroupElement, GroupElement>> pairs;
    for (std::size_t i = 0; i < 10000; ++i) pairs.emplace_back(mixed(m, rng, i), mixed(m, rng, i + (i % 3 == 0)));
    const InequalityReport r = check_inequalities(m, pairs, 1e-12);
    pass = pass && r.pass && r.pairs == 10000;
    worst = std::min({worst, r.herglotz_margin, r.krein_margin, r.weil_margin});
    ++states;
  }
  return {pass, std::to_string(states) + " states x 1e4 pairs, worst margin " + fmt("%.3e", worst)};
}

Outcome spherical_identity() {
  const SphereGrid grid = sphere_grid(64, 128);
  Rng rng(103);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double k = uniform(rng, 0.2, 3.0);
    const Vec3 c = random_unit_vector(rng) * uniform(rng, 0.0, 20.0) / k;
    const double r = (k * c).norm();
    const double sinc = r == 0 ? 1.0 : std::sin(r) / r;
    worst = std::max(worst, std::abs(sphere_average_expi(grid, k * c) - sinc));
  }
  return {worst <= 1e-8, "100 points, |kc| <= 20, max error " + fmt("%.3e", worst)};
}

Outcome cylindrical_identity() {
  const CircleGrid grid = circle_grid(512);
  Rng rng(104);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const double r = i == 0 ? 20.0 : uniform(rng, 0.0, 20.0), phi = uniform(rng, -kPi, kPi);
    const cplx avg = circle_average_expi(grid, r * std::cos(phi), r * std::sin(phi));
    worst = std::max(worst, std::abs(avg - std::cyl_bessel_j(0.0, r)));
  }
  return {worst <= 1e-10, "200 points, |kc_perp| <= 20, max error vs J0 " + fmt("%.3e", worst)};
}

std::vector<Mat3> octahedral_group() {
  const Mat3 gens[2] = {rotation_about(Vec3::UnitX(), kPi / 2), rotation_about(Vec3::UnitZ(), kPi / 2)};
  std::vector<Mat3> group{Mat3::Identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Mat3& g : gens) {
      const Mat3 next = (g * group[i]).array().round().matrix();
      if (std::none_of(group.begin(), group.end(), [&](const Mat3& h) { return (h - next).norm() < 1e-9; })) {
        group.push_back(next);
      }
    }
  }
  return group;
}

Outcome gns_recovery() {
  Rng rng(105);
  double coeff = 0, unit = 0, hom = 0, residual = 0;
  std::string ranks;
  auto run = [&](const State& m, const std::vector<GroupElement>& samples, const std::vector<GroupElement>& probes) {
    const GnsSpace space = build_gns(m, samples);
    ranks += (ranks.empty() ? "" : ",") + std::to_string(space.rank);
    std::vector<RepMatrix> reps;
    for (const auto& g : probes) {
      reps.push_back(rep_matrix(space, g));
      const RepMatrix& pi = reps.back();
      const auto r = pi.matrix.rows();
      residual = std::max(residual, pi.residual);
      coeff = std::max(coeff, std::abs(recovered_coefficient(space, pi) - m(g)));
      unit = std::max(unit, (pi.matrix.adjoint() * pi.matrix - Eigen::MatrixXcd::Identity(r, r)).norm());
    }
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
      const RepMatrix gh = rep_matrix(space, compose(probes[i], probes[i + 1]));
      hom = std::max(hom, (gh.matrix - reps[i].matrix * reps[i + 1].matrix).norm());
    }
  };
  StateParams p;
  p.k = 1.3, p.ell = -0.4;
  for (StateKind kind : {StateKind::HeisenbergLocP, StateKind::HeisenbergLocQ}) {
    const bool loc_p = kind == StateKind::HeisenbergLocP;
    std::vector<GroupElement> samples{GroupElement::identity(Family::Heisenberg)}, probes;
    for (int i = 1; i < 32; ++i) {
      const double shift = static_cast<double>(i % 5);
      samples.push_back(loc_p ? GroupElement(HeisenbergElement{uniform(rng, -2, 2), shift, uniform(rng, -2, 2)})
                              : GroupElement(HeisenbergElement{uniform(rng, -2, 2), uniform(rng, -2, 2), shift}));
    }
    for (int i = 0; i < 30; ++i) {
      probes.push_back(loc_p ? GroupElement(HeisenbergElement{uniform(rng, -3, 3), 0, uniform(rng, -3, 3)})
                             : GroupElement(HeisenbergElement{uniform(rng, -3, 3), uniform(rng, -3, 3), 0}));
    }
    run(make_state(kind, p), samples, probes);
  }
  {
    StateParams q;
    q.k = 1.2, q.s = 1;
    const auto group = octahedral_group();
    std::vector<GroupElement> samples, probes;
    for (const Mat3& A : group) {
      samples.push_back(make_euclid(A, samples.empty() ? Vec3::Zero()
                                                       : Vec3(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2))));
    }
    for (int i = 0; i < 30; ++i) {
      probes.push_back(make_euclid(group[rng() % group.size()],
                                   Vec3(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3))));
    }
    run(make_state(StateKind::EuclidPlane, q), samples, probes);
  }
  for (double j : {0.5, 1.5, 4.0}) {
    std::vector<GroupElement> samples{GroupElement::identity(Family::SU2)}, probes;
    for (int i = 1; i < 32; ++i) samples.push_back(random_group_element(Family::SU2, rng));
    for (int i = 0; i < 30; ++i) probes.push_back(random_group_element(Family::SU2, rng));
    run(su2_highest_weight(j), samples, probes);
  }
  const bool pass = coeff <= 1e-9 && unit <= 1e-9 && hom <= 1e-9 && residual <= 1e-9;
  return {pass, "ranks " + ranks + "; coefficient " + fmt("%.2e", coeff) + ", unitarity " + fmt("%.2e", unit) +
                    ", homomorphism " + fmt("%.2e", hom) + ", span residual " + fmt("%.2e", residual)};
}

Outcome table_rows() {
  StateParams p;
  p.k = 1.3, p.ell = -0.7, p.t = 0.6;
  const std::pair<HeisenbergRow, StateKind> rows[] = {{HeisenbergRow::A, StateKind::HeisenbergLocP},
                                                      {HeisenbergRow::B, StateKind::HeisenbergLocQ},
                                                      {HeisenbergRow::C, StateKind::HeisenbergLocT},
                                                      {HeisenbergRow::D, StateKind::HeisenbergCenter}};
  Rng rng(106);
  double worst = 0;
  for (const auto& [row, kind] : rows) {
    const State m = make_state(kind, p);
    const Action act = heisenberg_row_action(row, p.t);
    const SectionVector f = heisenberg_cyclic_vector(row, p.k, p.ell, p.t);
    for (std::size_t i = 0; i < 1000; ++i) {
      const GroupElement g = mixed(m, rng, i);
      worst = std::max(worst, std::abs(matrix_coefficient(act, f, g) - m(g)));
    }
  }
  return {worst <= 1e-12, "rows a-d x 1000 elements, max error " + fmt("%.3e", worst)};
}

Outcome prequant() {
  const double oracle_value = oracle::prequant_mass_outside(0, 0, 1, 0, 1);
  PrequantScenario s;
  const PrequantResult r = prequant_mass_outside(s);
  const bool pass = std::fabs(r.mass_outside - oracle_value) <= 1e-3 &&
                    std::fabs(oracle_value - kPrequantReference) <= 1e-9 && oracle_value > 0.05;
  return {pass, "mass outside " + fmt("%.6f", r.mass_outside) + ", oracle " + fmt("%.9f", oracle_value) +
                    ", reference " + fmt("%.9f", kPrequantReference)};
}

Outcome quantum() {
  StateParams p;
  p.k = 1.3, p.ell = -0.7, p.t = 0.6;
  std::vector<State> states;
  for (StateKind k : {StateKind::EuclidSpherical, StateKind::EuclidCylindrical, StateKind::HeisenbergLocP,
                      StateKind::HeisenbergLocQ, StateKind::HeisenbergLocT, StateKind::BargmannLocPE,
                      StateKind::BargmannLocQ}) {
    states.push_back(make_state(k, p));
  }
  StateParams plane = p;
  plane.s = 1;
  states.insert(states.begin(), make_state(StateKind::EuclidPlane, plane));
  states.push_back(su2_highest_weight(1.5));
  QuantumCheckOptions o;
  o.trials = 1000;
  o.n_max = 3;
  o.budget = 100000;
  o.seed = 11;
  bool pass = true;
  double worst = INFINITY;
  for (const State& m : states) {
    const QuantumReport r = quantum_check(m, orbit_for(m), o);
    pass = pass && r.pass && r.trials == 1000;
    worst = std::min(worst, r.worst_margin);
    if (!r.pass) std::printf("    %s: worst margin %.3e\n", m.name().c_str(), r.worst_margin);
  }
  const State one = constant_one(Family::Heisenberg);
  const QuantumReport bad = quantum_check(one, heisenberg_orbit(1.0, 0.0), o);
  bool witness = false;
  if (!bad.failures.empty()) {
    const QuantumTrial& w = bad.failures.front();
    cplx lhs{};
    for (std::size_t j = 0; j < w.Zs.size(); ++j) lhs += w.cs[j] * one(exp(w.Zs[j]));
    witness = std::fabs(std::abs(lhs) - w.lhs) < 1e-12 && w.lhs - w.rhs > 1e-6;
  }
  pass = pass && !bad.pass && witness;
  return {pass, std::to_string(states.size()) + " states x 1000 trials, worst margin " + fmt("%.3e", worst) +
                    "; constant one rejected with " + std::to_string(bad.failures.size()) + " witnesses"};
}

Outcome spectral() {
  StateParams p;
  p.k = 1.3, p.ell = -0.7;
  std::vector<std::string> notes;
  bool pass = true;
  auto dirac = [&](const State& m, const AlgebraElement& Z, double at, const char* what) {
    const SpectralEstimate e = spectral_estimate(m, Z, options_for(Z));
    const bool ok = e.classification == SpectralClass::Atomic && e.atoms.size() == 1 &&
                    std::fabs(e.atoms[0].frequency - at) < 1e-6 && std::fabs(e.atoms[0].mass - 1) < 1e-6;
    pass = pass && ok;
    notes.push_back(std::string(what) + (ok ? " dirac" : " WRONG"));
  };
  auto haar = [&](const State& m, const AlgebraElement& Z, const char* what) {
    SpectralOptions o;
    o.estimate_density = false;
    const bool ok = spectral_estimate(m, Z, o).classification == SpectralClass::HaarOnBohr;
    pass = pass && ok;
    notes.push_back(std::string(what) + (ok ? " haar" : " WRONG"));
  };
  const State locp = make_state(StateKind::HeisenbergLocP, p);
  dirac(locp, heisenberg_algebra(0, 0, 1), p.k, "LocP/gamma");
  haar(locp, heisenberg_algebra(0, 1, 0), "LocP/beta");
  const State locq = make_state(StateKind::BargmannLocQ, p);
  // Along b_0 the atom sits at the pairing of the base point (q = ell) with beta.
  dirac(locq, bargmann_algebra(0, 1, 0, 0), -p.ell, "LocQ/b_0");
  for (double t : {0.3, -0.8, 2.0}) haar(locq, bargmann_algebra(0, 1, -t, 0), "LocQ/b_t");
  SpectralOptions2 o2;
  const SpectralEstimate2 plane = spectral_estimate_2d(locq, bargmann_algebra(0, 0, 1, 0), bargmann_algebra(0, 0, 0, 1), o2);
  const bool ok = plane.classification == SpectralClass::HaarOnBohr;
  pass = pass && ok;
  notes.push_back(ok ? "LocQ/(gamma,eps) haar" : "LocQ/(gamma,eps) WRONG");
  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : ", ") + n;
  return {pass, detail};
}

Outcome su2_kostant() {
  Rng rng(110);
  double mass_err = 0, outside = 0;
  for (int two_j = 1; two_j <= 8; ++two_j) {
    for (int axis = 0; axis < 3; ++axis) {
      const Vec3 n = random_unit_vector(rng);
      const double scale = uniform(rng, 0.5, 2.0);
      const AlgebraElement Z = su2_algebra(scale * n);
      const State m = su2_highest_weight(0.5 * two_j);
      SpectralOptions window;
      window.T = 1000;
      window.N = std::size_t{1} << 16;
      const SpectralEstimate e = spectral_estimate(m, Z, options_for(Z, window));
      for (const auto& [lambda, mass] : oracle::highest_weight_masses(two_j, n)) {
        mass_err = std::max(mass_err, std::abs(bohr_atom(m, Z, lambda * scale, e.T, e.N).mass - mass));
      }
      for (const Atom& a : e.atoms) outside = std::max(outside, std::fabs(a.frequency) - 0.5 * two_j * scale);
    }
  }
  double dist = 0;
  for (double lambda : {0.5, 1.0, 2.0}) dist = std::max(dist, kostant_projection_check(lambda, 100000, 7).distance);
  const bool pass = mass_err <= 1e-8 && outside <= 1e-9 && dist <= 0.01;
  return {pass, "2j = 1..8 x 3 axes: atom mass error " + fmt("%.2e", mass_err) + ", max excursion " +
                    fmt("%.2e", outside) + "; projection distance " + fmt("%.4f", dist)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"positive definiteness", 30, positivity},
      {"pair inequalities", 10, inequalities},
      {"spherical wave quadrature", 5, spherical_identity},
      {"cylindrical wave quadrature", 2, cylindrical_identity},
      {"gns coefficient recovery", 20, gns_recovery},
      {"heisenberg table rows", 5, table_rows},
      {"prequantization leak", 10, prequant},
      {"quantum inequality", 120, quantum},
      {"spectral classification", 30, spectral},
      {"su2 weights and projection", 30, su2_kostant},
  };
  int failures = 0, index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %s  %-28s %6.2fs/%3.0fs%s  %s\n", index, pass ? "PASS" : "FAIL", c.name, secs,
                c.limit_seconds, in_time ? "" : " (over time)", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
