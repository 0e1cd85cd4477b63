#include "qstates/reproduce.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "qstates/error.hpp"
#include "qstates/induced.hpp"
#include "qstates/orbits.hpp"
#include "qstates/quadrature.hpp"
#include "qstates/report_io.hpp"
#include "qstates/spectral.hpp"

namespace qstates {

namespace {

constexpr std::array<std::string_view, 5> kTargets{"heisenberg-table", "bargmann-states", "euclid-waves",
                                                   "prequant-counterexample", "su2-weights"};

std::string label(const State& m) { return std::string(to_string(m.kind())); }

// Half generic elements, half from the subgroup where the state is a
// character. Euclid subgroup draws are followed by a generic translation
// every other time, which stays inside H and H+- but leaves the axis.
GroupElement mixed_element(const State& m, Rng& rng, std::size_t i) {
  if (i % 2 == 0) return random_group_element(m.family(), rng, 3.0);
  GroupElement h = m.sample_character_subgroup(rng);
  if (m.family() == Family::Euclid && i % 4 == 3) {
    const Vec3 c(uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0));
    h = compose(h, GroupElement(make_euclid(Mat3::Identity(), c)));
  }
  return h;
}

template <class Coefficient>
double max_coefficient_error(const State& m, std::size_t count, std::uint64_t seed, Coefficient&& coefficient) {
  Rng rng(seed);
  double worst = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const GroupElement g = mixed_element(m, rng, i);
    worst = std::max(worst, std::abs(coefficient(g) - m(g)));
  }
  return worst;
}

CheckRow verify_row(const State& m, std::uint64_t seed) {
  const VerifyOutcome v = verify_state(m, {}, seed);
  return {"positivity_and_inequalities", label(m), v.pass, to_json(v)};
}

CheckRow quantum_row(const State& m, const ReproduceOptions& o) {
  QuantumCheckOptions q;
  q.trials = o.trials;
  q.budget = o.budget;
  q.seed = o.seed;
  q.threads = o.threads;
  const QuantumReport r = quantum_check(m, orbit_for(m), q);
  return {"quantum_inequality", label(m), r.pass,
          {{"trials", r.trials}, {"worst_margin", r.worst_margin}, {"failures", r.failures.size()}}};
}

json atoms_json(const SpectralEstimate& e) {
  json atoms = json::array();
  for (const auto& a : e.atoms) atoms.push_back({{"frequency", a.frequency}, {"mass", a.mass}});
  return atoms;
}

// A single atom of mass 1 at `frequency`.
CheckRow dirac_row(const State& m, const AlgebraElement& Z, double frequency, std::string_view direction) {
  const SpectralEstimate e = spectral_estimate(m, Z, options_for(Z));
  const bool pass = e.classification == SpectralClass::Atomic && e.atoms.size() == 1 &&
                    std::fabs(e.atoms[0].frequency - frequency) < 1e-6 && std::fabs(e.atoms[0].mass - 1.0) < 1e-6;
  return {"spectral_dirac", label(m) + " along " + std::string(direction), pass,
          {{"classification", to_string(e.classification)}, {"expected_frequency", frequency}, {"atoms", atoms_json(e)}}};
}

CheckRow haar_row(const State& m, const AlgebraElement& Z, std::string_view direction) {
  SpectralOptions o;
  o.estimate_density = false;
  const SpectralEstimate e = spectral_estimate(m, Z, o);
  return {"spectral_haar_on_bohr", label(m) + " along " + std::string(direction),
          e.classification == SpectralClass::HaarOnBohr, {{"classification", to_string(e.classification)}}};
}

void heisenberg_table(ReproduceReport& rep, const ReproduceOptions& o) {
  StateParams p;
  p.k = 1.3;
  p.ell = -0.7;
  p.t = 0.6;
  const std::array<std::pair<HeisenbergRow, StateKind>, 4> rows{{{HeisenbergRow::A, StateKind::HeisenbergLocP},
                                                                  {HeisenbergRow::B, StateKind::HeisenbergLocQ},
                                                                  {HeisenbergRow::C, StateKind::HeisenbergLocT},
                                                                  {HeisenbergRow::D, StateKind::HeisenbergCenter}}};
  const std::array<std::string_view, 4> names{"a", "b", "c", "d"};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [row, kind] = rows[r];
    const State m = make_state(kind, p);
    const Action action = heisenberg_row_action(row, p.t);
    const SectionVector f = heisenberg_cyclic_vector(row, p.k, p.ell, p.t);
    const double err = max_coefficient_error(m, 1000, o.seed + r, [&](const GroupElement& g) {
      return matrix_coefficient(action, f, g);
    });
    rep.rows.push_back({"table_row_coefficients", "row " + std::string(names[r]) + " / " + label(m), err < 1e-12,
                        {{"samples", 1000}, {"max_error", err}}});
  }
  const State loc_p = make_state(StateKind::HeisenbergLocP, p);
  rep.rows.push_back(dirac_row(loc_p, heisenberg_algebra(0, 0, 1), p.k, "gamma"));
  rep.rows.push_back(haar_row(loc_p, heisenberg_algebra(0, 1, 0), "beta"));
}

void bargmann_states(ReproduceReport& rep, const ReproduceOptions& o) {
  StateParams p;
  p.k = 1.1;
  p.ell = -0.7;
  const State pe = make_state(StateKind::BargmannLocPE, p);
  const State q = make_state(StateKind::BargmannLocQ, p);
  rep.rows.push_back(verify_row(pe, o.seed));
  rep.rows.push_back(verify_row(q, o.seed + 1));

  const Action action = bargmann_p_action();
  const SectionVector f = SectionVector::delta(std::array{p.k});
  const double err = max_coefficient_error(pe, 1000, o.seed + 2, [&](const GroupElement& g) {
    return matrix_coefficient(action, f, g);
  });
  rep.rows.push_back({"induced_coefficients", label(pe), err < 1e-12, {{"samples", 1000}, {"max_error", err}}});

  // Atoms sit at <(1, k, l, k^2/2), Z> for the pairing -M alpha + p gamma - q beta - E eps.
  rep.rows.push_back(dirac_row(pe, bargmann_algebra(0, 0, 1, 0), p.k, "gamma"));
  rep.rows.push_back(dirac_row(pe, bargmann_algebra(0, 0, 0, 1), -0.5 * p.k * p.k, "epsilon"));
  rep.rows.push_back(dirac_row(q, bargmann_algebra(0, 1, 0, 0), -p.ell, "b_0"));
  rep.rows.push_back(haar_row(q, bargmann_algebra(0, 1, -0.8, 0), "b_t (t = 0.8)"));

  SpectralOptions2 o2;
  o2.seed = o.seed;
  const SpectralEstimate2 plane = spectral_estimate_2d(q, bargmann_algebra(0, 0, 1, 0), bargmann_algebra(0, 0, 0, 1), o2);
  rep.rows.push_back({"spectral_haar_on_bohr", label(q) + " on the (gamma, epsilon) plane",
                      plane.classification == SpectralClass::HaarOnBohr && plane.consistent,
                      {{"classification", to_string(plane.classification)}, {"diagonals_consistent", plane.consistent}}});

  rep.rows.push_back(quantum_row(pe, o));
  rep.rows.push_back(quantum_row(q, o));
}

void euclid_waves(ReproduceReport& rep, const ReproduceOptions& o) {
  constexpr double k = 1.5;
  StateParams pp;
  pp.k = k;
  pp.s = 1;
  StateParams ps;
  ps.k = k;
  StateParams pc;
  pc.k = k;
  pc.epsilon = 1;
  const State plane = make_state(StateKind::EuclidPlane, pp);
  const State spherical = make_state(StateKind::EuclidSpherical, ps);
  const State cylindrical = make_state(StateKind::EuclidCylindrical, pc);

  std::uint64_t seed = o.seed;
  for (const State* m : {&plane, &spherical, &cylindrical}) rep.rows.push_back(verify_row(*m, seed++));

  // The discrete module realizes the helicity-zero plane wave.
  const State plane0 = make_state(StateKind::EuclidPlane, ps);
  {
    const Action action = euclid_sphere_action(k);
    const SectionVector f = SectionVector::delta(std::array{0.0, 0.0, 1.0});
    const double err = max_coefficient_error(plane0, 1000, seed++, [&](const GroupElement& g) {
      return matrix_coefficient(action, f, g);
    });
    rep.rows.push_back({"induced_coefficients", label(plane0) + " (s = 0)", err < 1e-12,
                        {{"samples", 1000}, {"max_error", err}}});
  }
  {
    const auto grid = std::make_shared<const SphereGrid>(sphere_grid(64, 128));
    const Action action = euclid_sphere_action(k);
    const SectionVector one = SectionVector::on_sphere(grid, [](const Vec3&) { return cplx{1.0, 0.0}; });
    const double err = max_coefficient_error(spherical, 1000, seed++, [&](const GroupElement& g) {
      return matrix_coefficient(action, one, g);
    });
    rep.rows.push_back({"induced_coefficients", label(spherical), err < 1e-8, {{"samples", 1000}, {"max_error", err}}});
  }
  {
    const CircleGrid grid = circle_grid(512);
    const double err = max_coefficient_error(cylindrical, 1000, seed++, [&](const GroupElement& g) {
      return cylindrical_coefficient(k, pc.epsilon, g, grid);
    });
    rep.rows.push_back({"induced_coefficients", label(cylindrical), err < 1e-10, {{"samples", 1000}, {"max_error", err}}});
  }

  const AlgebraElement vertical = euclid_algebra(Vec3::Zero(), Vec3::UnitZ());
  const SpectralEstimate e = spectral_estimate(spherical, vertical);
  double inside = 0;
  if (e.density) inside = e.density->mass_between(-k, k);
  rep.rows.push_back({"spectral_uniform_density", label(spherical) + " along e3",
                      e.classification == SpectralClass::UniformDensity && std::fabs(inside - 1.0) <= 1e-3,
                      {{"classification", to_string(e.classification)}, {"mass_in_interval", inside}, {"k", k}}});
  if (e.density) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < e.density->frequency.size(); ++i) {
      rows.push_back({e.density->frequency[i], e.density->value[i]});
    }
    rep.plots["spherical_density"] = plot_table({"omega", "density"}, rows);
  }

  for (const State* m : {&plane, &spherical, &cylindrical}) rep.rows.push_back(quantum_row(*m, o));
}

void prequant_counterexample(ReproduceReport& rep, const ReproduceOptions& o) {
  const PrequantScenario main = o.prequant.value_or(PrequantScenario{});
  const PrequantResult r = prequant_mass_outside(main);
  rep.rows.push_back({"prequant_mass_outside", "scenario", r.mass_outside > 0.05,
                      {{"mass_outside", r.mass_outside},
                       {"coarse", r.coarse},
                       {"normalization", r.normalization},
                       {"resolution", r.resolution},
                       {"center", {main.center[0], main.center[1]}}}});

  PrequantScenario dirac;
  dirac.kind = PrequantScenario::Kind::Dirac;
  const double at_origin = prequant_mass_outside(dirac).mass_outside;
  rep.rows.push_back({"prequant_mass_outside", "point mass at (0, 0)", at_origin == 0.0, {{"mass_outside", at_origin}}});

  PrequantScenario shifted;
  shifted.center = {0.0, 10.0};
  const double far = prequant_mass_outside(shifted).mass_outside;
  rep.rows.push_back({"prequant_mass_outside", "gaussian at (0, 10)", far > 0.9, {{"mass_outside", far}}});
}

// C(2j, j+m) ((1+u3)/2)^{j+m} ((1-u3)/2)^{j-m}.
double weight_mass(int two_j, int j_plus_m, double u3) {
  const double up = 0.5 * (1 + u3), down = 0.5 * (1 - u3);
  return std::exp(std::lgamma(two_j + 1.0) - std::lgamma(j_plus_m + 1.0) - std::lgamma(two_j - j_plus_m + 1.0)) *
         std::pow(up, j_plus_m) * std::pow(down, two_j - j_plus_m);
}

void su2_weights(ReproduceReport& rep, const ReproduceOptions& o) {
  Rng rng(o.seed);
  for (int two_j = 1; two_j <= 8; ++two_j) {
    const double j = 0.5 * two_j;
    const State m = su2_highest_weight(j);
    const Vec3 u = random_unit_vector(rng);
    const AlgebraElement Z = su2_algebra(u);
    const double T = 4 * std::numbers::pi * 100;
    double worst = 0;
    json masses = json::array();
    for (int jm = 0; jm <= two_j; ++jm) {
      const double weight = jm - j;
      const BohrMean b = bohr_atom(m, Z, weight, T, std::size_t{1} << 16);
      const double expected = weight_mass(two_j, jm, u[2]);
      worst = std::max(worst, std::abs(b.mass - expected));
      masses.push_back({{"weight", weight}, {"mass", b.mass.real()}, {"expected", expected}});
    }
    rep.rows.push_back({"weight_masses", "j = " + format_number(j), worst <= 1e-8,
                        {{"axis", {u[0], u[1], u[2]}}, {"max_error", worst}, {"atoms", masses}}});

    SpectralOptions so = options_for(Z);
    so.estimate_density = false;
    const SpectralEstimate e = spectral_estimate(m, Z, so);
    bool inside = e.classification == SpectralClass::Atomic;
    for (const auto& a : e.atoms) inside = inside && std::fabs(a.frequency) <= j + 1e-9;
    rep.rows.push_back({"atoms_in_weight_interval", "j = " + format_number(j), inside,
                        {{"classification", to_string(e.classification)}, {"atoms", atoms_json(e)}}});
  }
  for (double lambda : {0.5, 1.0, 2.0}) {
    const KostantReport k = kostant_projection_check(lambda, 100000, o.seed);
    rep.rows.push_back({"kostant_projection", "lambda = " + format_number(lambda), k.distance <= 0.01,
                        {{"hausdorff_distance", k.distance}, {"samples", k.projections.size()}}});
    if (lambda == 1.0) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < std::min<std::size_t>(2000, k.projections.size()); ++i) {
        rows.push_back({static_cast<double>(i), k.projections[i]});
      }
      rep.plots["kostant_projection"] = plot_table({"sample", "projection"}, rows);
    }
  }
}

}  // namespace

VerifyOutcome verify_state(const State& m, const VerifyOptions& options, std::uint64_t seed) {
  if (options.samples < 1 || options.sets < 1) throw Error(ErrorCode::InvalidParameter, "verify: empty sample sets");
  Rng rng(seed);
  VerifyOutcome out;
  double worst_ratio = std::numeric_limits<double>::infinity();
  bool psd_ok = true;
  for (std::size_t s = 0; s < options.sets; ++s) {
    const auto samples = structured_samples(m, options.samples, rng);
    const PsdReport r = check_psd(gram(m, samples));
    psd_ok = psd_ok && r.pass;
    const double ratio = r.min_eigenvalue / static_cast<double>(samples.size());
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      out.worst_psd = r;
    }
  }
  std::vector<std::pair<GroupElement, GroupElement>> pairs;
  pairs.reserve(options.pairs);
  for (std::size_t i = 0; i < options.pairs; ++i) {
    GroupElement g = mixed_element(m, rng, i);
    GroupElement h = mixed_element(m, rng, i);
    pairs.emplace_back(std::move(g), std::move(h));
  }
  out.inequalities = check_inequalities(m, pairs);
  out.pass = psd_ok && out.inequalities.pass;
  return out;
}

json to_json(const InequalityReport& r) {
  json j = {{"pairs", r.pairs},
            {"herglotz_margin", r.herglotz_margin},
            {"krein_margin", r.krein_margin},
            {"weil_margin", r.weil_margin},
            {"pass", r.pass}};
  if (r.witness) {
    j["witness"] = {{"g", to_json(r.witness->g)},
                    {"h", to_json(r.witness->h)},
                    {"inequality", r.witness->inequality},
                    {"lhs", r.witness->lhs},
                    {"rhs", r.witness->rhs}};
  }
  return j;
}

json to_json(const VerifyOutcome& v) {
  return {{"psd", {{"min_eigenvalue", v.worst_psd.min_eigenvalue}, {"threshold", v.worst_psd.threshold}}},
          {"inequalities", to_json(v.inequalities)},
          {"pass", v.pass}};
}

bool ReproduceReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

json ReproduceReport::to_json() const {
  json matrix = json::object();
  json checks = json::array();
  for (const auto& r : rows) {
    matrix[r.check][r.subject] = r.pass;
    checks.push_back({{"check", r.check}, {"subject", r.subject}, {"pass", r.pass}, {"detail", r.detail}});
  }
  return {{"target", target}, {"pass", pass()}, {"matrix", matrix}, {"checks", checks}, {"plots", plots}};
}

std::span<const std::string_view> reproduce_targets() { return kTargets; }

ReproduceReport reproduce(std::string_view target, const ReproduceOptions& options) {
  ReproduceReport rep;
  rep.target = std::string(target);
  if (target == "heisenberg-table") {
    heisenberg_table(rep, options);
  } else if (target == "bargmann-states") {
    bargmann_states(rep, options);
  } else if (target == "euclid-waves") {
    euclid_waves(rep, options);
  } else if (target == "prequant-counterexample") {
    prequant_counterexample(rep, options);
  } else if (target == "su2-weights") {
    su2_weights(rep, options);
  } else {
    throw Error(ErrorCode::UnknownTarget, "unknown reproduce target '" + std::string(target) + "'");
  }
  return rep;
}

}  // namespace qstates
