#pragma once

// Coadjoint orbits as sampled charts, moment maps, projections to commuting
// subalgebras and the sampled sup-inequality check for quantum states.
//
// Charts (all phases <x, Z> are linear in the dual coordinates of x):
//   Heisenberg  (p, q)        -> (1, p, q)                  the plane M = 1
//   Bargmann    (p, q)        -> (1, p, q, p^2/2)           the paraboloid
//   Euclid      (r[3], u[3])  -> (r x ku + su, ku)          X^{k,s}, |u| = 1
//   SU2         u[3]          -> lambda u                   sphere of radius lambda
// Unbounded chart coordinates are sampled in [-box_radius, box_radius].

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qstates/states.hpp"

namespace qstates {

struct OrbitSpec {
  Family family = Family::Heisenberg;
  double k = 1.0;       // Heisenberg/Bargmann base momentum, Euclid wavenumber
  double ell = 0.0;     // Heisenberg/Bargmann base position
  double s = 0.0;       // Euclid helicity
  double lambda = 1.0;  // SU2 radius
  double box_radius = 50.0;

  /// Number of chart coordinates: 2, 2, 6 (r then u) or 3.
  std::size_t chart_dim() const;
  std::size_t dual_dim() const;
  /// Distinguished points (the base point and, for spheres, the axis points).
  std::vector<std::vector<double>> anchors() const;
  /// Orbit relations (Casimirs) hold to `tol`.
  bool satisfies_relations(const CoadjointVector& x, double tol = kDefaultTolerances.orbit_relation) const;
  /// Largest violation of the orbit relations.
  double relation_defect(const CoadjointVector& x) const;
};

OrbitSpec heisenberg_orbit(double k, double ell);
OrbitSpec bargmann_orbit(double k = 0.0, double ell = 0.0);
/// Throws Error{InvalidParameter} for k <= 0.
OrbitSpec euclid_orbit(double k, double s);
/// Throws Error{InvalidParameter} for lambda < 0.
OrbitSpec su2_orbit(double lambda);
/// The orbit a built-in state is localized on (base point from its parameters).
OrbitSpec orbit_for(const State& m);

/// Moment map of the chart. Euclid points are (r[3], u[3]); the component of
/// r along u is dropped. Throws Error{NonUnitSupport} if u (Euclid, SU2) is
/// not a unit vector within 1e-9, Error{InvalidParameter} on a size mismatch.
CoadjointVector moment(const OrbitSpec& spec, std::span<const double> point);

/// The group acting on chart points, covering the coadjoint action:
/// moment(spec, transport(spec, g, x)) == coadjoint(g, moment(spec, x)).
/// Heisenberg, Bargmann and Euclid.
std::vector<double> transport(const OrbitSpec& spec, const GroupElement& g, std::span<const double> point);

/// Uniform draw from the chart (sphere factors uniform, boxes uniform).
std::vector<double> sample_chart(const OrbitSpec& spec, Rng& rng);

/// (<w, Z_1>, ..., <w, Z_n>). Throws Error{NonCommuting} unless the Z_j commute.
std::vector<double> project(const CoadjointVector& w, std::span<const AlgebraElement> Zs);

/// A fixed seeded sample of the chart in structure-of-arrays layout, shared
/// by every tuple of a quantum check.
struct OrbitSamples {
  OrbitSpec spec;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<std::vector<double>> chart;  // chart[d][i]
  std::vector<std::vector<double>> dual;   // dual[d][i] = moment coordinates
};

/// The first n samples do not depend on the budget. Throws
/// Error{InvalidParameter} for budget < 1000.
OrbitSamples sample_orbit(const OrbitSpec& spec, std::size_t budget, std::uint64_t seed = 0);

struct OrbitSup {
  double value = 0;           // lower estimate of sup_X |sum_j c_j e^{i<x, Z_j>}|
  std::size_t samples = 0;
  std::size_t ascent_iterations = 0;
  std::vector<double> argmax;  // chart point attaining `value`
  bool analytic = false;       // closed-form shortcut (n = 1)
};

/// Sampled sup of the trigonometric polynomial on the orbit, refined by
/// projected-gradient ascent (50 steps) from the anchors and from the best 8
/// samples of every prefix budget, budget/2, budget/4, ... (>= 1000). Results
/// are therefore nondecreasing when the budget doubles. Throws
/// Error{NonCommuting} for a non-commuting tuple, Error{InvalidParameter}
/// for budget < 1000 or a size mismatch.
OrbitSup orbit_sup(const OrbitSpec& spec, std::span<const AlgebraElement> Zs, std::span<const cplx> cs,
                   std::size_t budget, std::uint64_t seed = 0);
OrbitSup orbit_sup(const OrbitSamples& samples, std::span<const AlgebraElement> Zs, std::span<const cplx> cs);

/// Commuting-tuple whitelists used by the quantum check.
///   Heisenberg: center + one line (beta, gamma, the state's h_t line, or generic)
///   Bargmann:   center + one line (b_0, b_t, gamma, generic), or center + the c plane
///   Euclid:     translations, or rotation + translation along a common axis
///   SU2:        a torus line
enum class CommutingFamily { CenterLine, CenterPlane, Translations, AxisPair, TorusLine };
std::string_view to_string(CommutingFamily f) noexcept;

struct QuantumTrial {
  std::size_t index = 0;
  CommutingFamily tuple_family = CommutingFamily::CenterLine;
  std::vector<AlgebraElement> Zs;
  std::vector<cplx> cs;
  double lhs = 0;  // |sum_j c_j m(exp Z_j)|
  double rhs = 0;  // orbit_sup
  double margin = 0;
};

struct QuantumReport {
  std::size_t trials = 0;
  double worst_margin = 0;
  double slack = 0;
  bool pass = true;
  std::vector<QuantumTrial> per_trial;
  std::vector<QuantumTrial> failures;  // margin < -slack
};

struct QuantumCheckOptions {
  std::size_t trials = 1000;
  std::size_t n_max = 3;
  std::size_t budget = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double slack = kDefaultTolerances.check_margin;
};

/// Draws commuting tuples from the family whitelist (trial i uses the
/// stream seed ^ i) and compares |sum c_j m(exp Z_j)| with the orbit sup.
/// Throws Error{FamilyMismatch} if the state and the orbit differ in family.
QuantumReport quantum_check(const State& m, const OrbitSpec& spec, const QuantumCheckOptions& options = {});

/// Draws one whitelisted tuple (exposed for tests).
QuantumTrial draw_commuting_tuple(const State& m, std::size_t n_max, Rng& rng);

struct KostantReport {
  double distance = 0;  // Hausdorff distance to [-lambda, lambda]
  std::vector<double> projections;
};

/// Projects uniform samples of the lambda-sphere onto a torus direction
/// (the third axis) and measures the Hausdorff distance to [-lambda, lambda].
/// Throws Error{InvalidParameter} for lambda <= 0.
KostantReport kostant_projection_check(double lambda, std::size_t samples, std::uint64_t seed = 0);

}  // namespace qstates
