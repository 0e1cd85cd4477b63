#pragma once

// Closed-form states (normalized positive-definite functions) on the
// concrete families, Gram matrices and the inequality checks every state
// must satisfy.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstates/config.hpp"
#include "qstates/lie.hpp"
#include "qstates/sampling.hpp"

namespace qstates {

enum class StateKind {
  HeisenbergLocP,     // e^{-ia} [b=0] e^{ikc}
  HeisenbergLocQ,     // e^{-ia} e^{-il b} [c=0]
  HeisenbergLocT,     // e^{i x.log g} on H_t = {c = -bt}, 0 elsewhere
  HeisenbergCenter,   // e^{-ia} [b=0][c=0]
  BargmannLocPE,      // e^{-ia} [b=0] e^{i(kc - k^2 e/2)}
  BargmannLocQ,       // e^{-ia} e^{-il b} [c=0][e=0]
  EuclidPlane,        // e^{is alpha} e^{ik c3} if A = rot(alpha e3), else 0
  EuclidSpherical,    // sin|kc| / |kc|
  EuclidCylindrical,  // (+-1)^eps J0(|k c_perp|) if A e3 = +-e3, else 0
  SU2HighestWeight,   // alpha^{2j}
  ConstantOne,
  Custom,
};

std::string_view to_string(StateKind kind) noexcept;
StateKind state_kind_from_string(std::string_view name);
/// Family of a closed-form kind; empty for ConstantOne and Custom.
std::optional<Family> family_of(StateKind kind) noexcept;

struct StateParams {
  double k = 1.0;      // wavenumber / momentum
  double s = 0.0;      // helicity (integer)
  double ell = 0.0;    // position
  double t = 0.0;      // polarization parameter of H_t
  double j = 0.0;      // spin (half-integer)
  int epsilon = 0;     // parity for the cylindrical waves
};

/// Subgroup on which a localized state restricts to a character, with the
/// dual point it is localized at. Purely descriptive.
struct Localization {
  std::string subgroup;
  std::string dual_point;
};

class State {
 public:
  using Evaluator = std::function<cplx(const GroupElement&)>;

  Family family() const noexcept { return family_; }
  StateKind kind() const noexcept { return kind_; }
  const StateParams& params() const noexcept { return params_; }
  const std::optional<Localization>& localization() const noexcept { return localization_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t torus_dim() const noexcept { return torus_dim_; }

  /// Throws Error{FamilyMismatch} for an element of another family.
  cplx operator()(const GroupElement& g) const;

  /// |m(g)| == 1 exactly in the closed form, i.e. g lies in the subgroup where
  /// the state is a character. Meaningful for the built-in kinds.
  bool in_character_subgroup(const GroupElement& g) const;

  /// Draws an element of that subgroup (or a generic element when the state
  /// is continuous everywhere).
  GroupElement sample_character_subgroup(Rng& rng, double scale = 3.0) const;

  friend State make_state(StateKind, const StateParams&, Family, const Tolerances&);
  friend State custom_state(Family, Evaluator, std::string, std::size_t);

 private:
  State() = default;

  Family family_ = Family::Heisenberg;
  StateKind kind_ = StateKind::ConstantOne;
  StateParams params_;
  Tolerances tol_;
  std::optional<Localization> localization_;
  std::string name_;
  std::size_t torus_dim_ = 1;
  Evaluator custom_;
};

/// Builds a closed-form state. `family` is only consulted for ConstantOne.
/// Throws Error{NonIntegralParameter} when integrality fails (helicity s,
/// spin 2j, parity epsilon) and Error{InvalidParameter} for k <= 0 on the
/// Euclid kinds or 2j outside {0,...,8}.
State make_state(StateKind kind, const StateParams& params = {}, Family family = Family::Heisenberg,
                 const Tolerances& tol = kDefaultTolerances);

State su2_highest_weight(double j);
State constant_one(Family family);
State custom_state(Family family, State::Evaluator evaluator, std::string name, std::size_t torus_dim = 1);

// ---------------------------------------------------------------- Gram form

struct GramMatrix {
  std::vector<GroupElement> samples;
  Eigen::MatrixXcd entries;        // K_ij = m(s_i^{-1} s_j)
  Eigen::VectorXd eigenvalues;     // descending
  Eigen::MatrixXcd eigenvectors;   // columns match eigenvalues

  std::size_t size() const noexcept { return samples.size(); }
  /// Number of eigenvalues above tol * n.
  std::size_t rank(double tol) const;
  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues[eigenvalues.size() - 1] : 0.0; }
  double hermitian_defect() const;
};

GramMatrix gram(const State& m, std::span<const GroupElement> samples);

struct PsdReport {
  double min_eigenvalue = 0;
  double threshold = 0;  // -tol * n
  bool pass = false;
};

PsdReport check_psd(const GramMatrix& gm, double tol = kDefaultTolerances.psd_per_sample);

struct InequalityWitness {
  GroupElement g, h;
  std::string inequality;
  double lhs = 0, rhs = 0;
};

struct InequalityReport {
  std::size_t pairs = 0;
  double herglotz_margin = 0;  // min over g of 1 - |m(g)|
  double krein_margin = 0;     // min of sqrt(2 Re(1 - m(g^-1 h))) - |m(g) - m(h)|
  double weil_margin = 0;      // min of sqrt(1-|m(g)|^2) sqrt(1-|m(h)|^2) - |m(gh) - m(g) m(h)|
  bool pass = true;
  std::optional<InequalityWitness> witness;  // first violation
};

InequalityReport check_inequalities(const State& m, std::span<const std::pair<GroupElement, GroupElement>> pairs,
                                    double slack = kDefaultTolerances.inequality_slack);

struct ModulusPartition {
  std::vector<std::size_t> inside;   // | |m(g)| - 1 | < tol
  std::vector<std::size_t> outside;
  std::size_t products_checked = 0;
  /// Pairs (i, j) of inside samples whose product s_i s_j^{-1} fell outside.
  std::vector<std::pair<std::size_t, std::size_t>> closure_violations;
  bool closed() const noexcept { return closure_violations.empty(); }
};

ModulusPartition modulus_one_subgroup_probe(const State& m, std::span<const GroupElement> samples,
                                            double tol = kDefaultTolerances.modulus_one);

/// n samples of the form r * h with r from a small coset pool and h from the
/// state's character subgroup, mixed with generic elements, so that Gram
/// matrices of discontinuous states are not trivially diagonal.
std::vector<GroupElement> structured_samples(const State& m, std::size_t n, Rng& rng, double scale = 3.0);

}  // namespace qstates
