#pragma once

// Spectral measures of a state restricted to one- and two-parameter abelian
// subgroups. Convention: m(exp tZ) = integral of e^{i omega t} d mu(omega).
// Atoms come from Bohr means (1/2T) int_{-T}^{T} m(exp tZ) e^{-i omega t} dt
// on a midpoint grid (t = 0 is never a node), the continuous part from a
// Gaussian-windowed Fourier transform of what is left after the atoms.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qstates/states.hpp"

namespace qstates {

enum class SpectralClass {
  Atomic,
  UniformDensity,         // no atoms, flat density on an interval
  AbsolutelyContinuous,   // no atoms, non-flat density
  HaarOnBohr,             // m(exp tZ) = 0 for t != 0, m(e) = 1
  Mixed,
};
std::string_view to_string(SpectralClass c) noexcept;

struct Atom {
  double frequency = 0;
  double mass = 0;          // real part of the Bohr mean
  double imag_residue = 0;  // imaginary part, ~0 for genuine states
};

struct DensityGrid {
  std::vector<double> frequency, value;
  /// Exact mass of the smoothed density on [frequency[0], frequency[i]],
  /// integrated in the time domain (no grid error at sharp edges).
  std::vector<double> cumulative;
  /// The same antiderivative at any frequency (set by the estimator).
  std::function<double(double)> exact_cumulative;
  double mass() const;
  /// Mass on [lo, hi] clipped to the grid range, from exact_cumulative when
  /// present and from interpolated cumulative masses otherwise.
  double mass_between(double lo, double hi) const;
};

struct SpectralEstimate {
  std::vector<Atom> atoms;  // sorted by frequency
  std::optional<DensityGrid> density;
  SpectralClass classification = SpectralClass::Mixed;
  double atom_mass = 0;
  double density_mass = 0;
  double total_mass_accounted = 0;
  double leakage_bound = 0;  // pi / T
  double T = 0;
  std::size_t N = 0;
};

struct SpectralOptions {
  double T = 4000.0;             // half window
  std::size_t N = std::size_t{1} << 18;  // samples on [-T, T]
  /// If positive, T is rounded up to a multiple of this period (exact Bohr
  /// means for trigonometric polynomials with frequencies on a lattice).
  double period = 0.0;
  std::size_t density_points = 401;
  bool estimate_density = true;
  Tolerances tol = kDefaultTolerances;
};

/// Options with the SU(2) rule applied: T becomes a multiple of 2 pi / |Z|.
SpectralOptions options_for(const AlgebraElement& Z, SpectralOptions base = {});

struct BohrMean {
  cplx mass;
  double leakage_bound = 0;
};

/// Bohr mean at omega. Throws Error{InvalidParameter} for N < 4096, odd N,
/// or T < 100.
BohrMean bohr_atom(const State& m, const AlgebraElement& Z, double omega, double T, std::size_t N);

/// Detect-subtract-refine atoms, then the windowed density of the rest.
SpectralEstimate spectral_estimate(const State& m, const AlgebraElement& Z, const SpectralOptions& options = {});

/// The same on a precomputed sample t_i -> f(t_i) (midpoint grid of
/// spectral_times) with f(0) given separately.
SpectralEstimate spectral_estimate_samples(const std::vector<double>& t, const std::vector<cplx>& f, cplx f0,
                                           const SpectralOptions& options);

/// Midpoint grid of N points on [-T, T].
std::vector<double> spectral_times(double T, std::size_t N);

/// Atoms removed first, then the windowed transform. Equivalent to
/// spectral_estimate with density enabled.
SpectralEstimate density_estimate(const State& m, const AlgebraElement& Z, double T, std::size_t N);

// ---------------------------------------------------------------- concentration

struct FrequencySet {
  enum class Kind { Interval, Points, Everything } kind = Kind::Interval;
  double lo = 0, hi = 0;        // Interval
  std::vector<double> points;   // Points
  static FrequencySet interval(double lo, double hi) { return {Kind::Interval, lo, hi, {}}; }
  static FrequencySet finite(std::vector<double> pts) { return {Kind::Points, 0, 0, std::move(pts)}; }
  static FrequencySet everything() { return {Kind::Everything, 0, 0, {}}; }
  bool contains(double omega, double eps) const;
};

struct ConcentrationReport {
  double mass_outside = 0;
  double allowed = 0;  // concentration_mass + leakage bound
  bool pass = false;
};

/// Mass of the estimate outside the eps-neighbourhood of the set. A
/// haar_on_bohr estimate lives on the Bohr compactification and is only
/// concentrated on Everything.
ConcentrationReport concentration_check(const SpectralEstimate& est, const FrequencySet& set,
                                        const Tolerances& tol = kDefaultTolerances);

// ---------------------------------------------------------------- two parameters

struct Atom2 {
  double frequency[2] = {0, 0};
  double mass = 0;
};

struct DiagonalCheck {
  double angle = 0;
  SpectralEstimate estimate;
  bool consistent = false;  // agrees with the projection of the 2-D estimate
};

struct SpectralEstimate2 {
  SpectralEstimate axis[2];
  std::vector<Atom2> atoms;  // tensor-grid Bohr means at the axis atom pairs
  SpectralClass classification = SpectralClass::Mixed;
  std::vector<DiagonalCheck> diagonals;
  bool consistent = false;
};

struct SpectralOptions2 {
  SpectralOptions line{2000.0, std::size_t{1} << 17};
  double T = 200.0;           // tensor grid half window per axis
  std::size_t grid = 256;     // tensor grid points per axis
  std::size_t diagonals = 10;
  std::uint64_t seed = 0;
};

/// Throws Error{NonCommuting} unless [Z1, Z2] = 0.
SpectralEstimate2 spectral_estimate_2d(const State& m, const AlgebraElement& Z1, const AlgebraElement& Z2,
                                       const SpectralOptions2& options = {});

}  // namespace qstates
