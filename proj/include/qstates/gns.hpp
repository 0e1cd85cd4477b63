#pragma once

// Finite-sample GNS construction. Kernel vectors v_s (s in the sample list)
// carry the Gram form <v_s, v_t> = m(s^{-1} t); the quotient by its null
// space is represented in the orthonormal basis e = V_r diag(lambda)^{-1/2}
// built from the eigenvectors with eigenvalue above tol * n.

#include <span>
#include <string_view>
#include <vector>

#include "qstates/states.hpp"

namespace qstates {

struct GnsSpace {
  State state;
  std::vector<GroupElement> samples;  // samples[0] is the identity
  GramMatrix gram;
  std::size_t rank = 0;
  double tol = 0;
  Eigen::MatrixXcd coordinates;  // r x n, column t = coordinates of v_{s_t}
  Eigen::MatrixXcd basis;        // n x r, column a = expansion of e_a over the v_s
  Eigen::VectorXcd cyclic;       // coordinates of v_e
};

/// Throws Error{InvalidParameter} if samples[0] is not the identity and
/// Error{NotAState} if the Gram matrix has an eigenvalue below -tol * n.
GnsSpace build_gns(const State& m, std::span<const GroupElement> samples,
                   double tol = kDefaultTolerances.psd_per_sample);

struct RepMatrix {
  Eigen::MatrixXcd matrix;  // r x r, compression of the left action
  /// sum_b ||(1 - P) g.e_b||^2, the squared Frobenius norm of the part of
  /// the image outside the span (0 up to rounding when the span is invariant).
  double residual = 0;
};

RepMatrix rep_matrix(const GnsSpace& space, const GroupElement& g);

/// <cyclic, pi(g) cyclic>.
cplx recovered_coefficient(const GnsSpace& space, const RepMatrix& pi);

/// For f = sum_t f_t v_{s_t} and c supported on the samples, compares the
/// direct evaluation sum_s conj(c_s) f(s) (f(x) = sum_t f_t m(x^{-1} s_t))
/// with the inner product (v_c, f) computed in GNS coordinates. Returns the
/// largest defect over all pairs.
double reproducing_check(const GnsSpace& space, std::span<const Eigen::VectorXcd> functions,
                         std::span<const Eigen::VectorXcd> coefficients);

enum class CommutantPolicy {
  Strict,      // every generator must act on the span (residual <= tol)
  Compressed,  // commutant of the compressed operators; a proxy when no
               // finite sample set is invariant (e.g. translations)
};

std::string_view to_string(CommutantPolicy p) noexcept;

struct CommutantReport {
  std::size_t dimension = 0;
  CommutantPolicy policy = CommutantPolicy::Strict;
  double max_residual = 0;
  double smallest_nonzero_singular = 0;
};

/// Dimension of {X : X pi(g) = pi(g) X for every generator}, from the null
/// space of the stacked commutator map at singular-value tolerance
/// tol.commutant_singular. Strict policy throws Error{ResidualPrecondition}
/// when some generator has residual above tol.rep_residual.
CommutantReport commutant_dim(const GnsSpace& space, std::span<const GroupElement> generators,
                              CommutantPolicy policy = CommutantPolicy::Strict,
                              const Tolerances& tol = kDefaultTolerances);

/// max_h || pi(h) cyclic - chi(h) cyclic ||. Throws Error{ResidualPrecondition}
/// when some h has residual above tol.rep_residual.
double eigenvector_check(const GnsSpace& space, std::span<const GroupElement> subgroup_samples,
                         std::span<const cplx> characters, const Tolerances& tol = kDefaultTolerances);

}  // namespace qstates
