#include "qstates/gns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qstates/error.hpp"

namespace qstates {

namespace {

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

GnsSpace build_gns(const State& m, std::span<const GroupElement> samples, double tol) {
  if (samples.empty() || !is_identity(samples.front(), kDefaultTolerances.group_identity)) {
    throw Error(ErrorCode::InvalidParameter, "gns: the first sample must be the identity");
  }
  GnsSpace space{m, {samples.begin(), samples.end()}, gram(m, samples), 0, tol, {}, {}, {}};
  const GramMatrix& gm = space.gram;
  const double n = static_cast<double>(gm.size());
  if (gm.min_eigenvalue() < -tol * n) {
    throw Error(ErrorCode::NotAState, "gns: Gram matrix has eigenvalue " + std::to_string(gm.min_eigenvalue()) +
                                          " below -tol*n; not a state on this sample");
  }
  const auto r = static_cast<Eigen::Index>(gm.rank(tol));
  space.rank = static_cast<std::size_t>(r);
  const Eigen::VectorXd lam = gm.eigenvalues.head(r);
  const Eigen::MatrixXcd Vr = gm.eigenvectors.leftCols(r);
  space.coordinates = lam.cwiseSqrt().asDiagonal() * Vr.adjoint();
  space.basis = Vr * lam.cwiseSqrt().cwiseInverse().asDiagonal();
  space.cyclic = space.coordinates.col(0);
  return space;
}

RepMatrix rep_matrix(const GnsSpace& space, const GroupElement& g) {
  const auto n = static_cast<Eigen::Index>(space.samples.size());
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const GroupElement left = compose(inverse(space.samples[i]), g);
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = space.state(compose(left, space.samples[j]));
  }
  RepMatrix out;
  out.matrix = space.basis.adjoint() * M * space.basis;
  // Squared norm of the part outside the span; its square root would turn
  // rounding in the subtraction into ~1e-8.
  out.residual = std::fabs(static_cast<double>(space.rank) - out.matrix.squaredNorm());
  return out;
}

cplx recovered_coefficient(const GnsSpace& space, const RepMatrix& pi) {
  return space.cyclic.dot(pi.matrix * space.cyclic);  // dot() conjugates the left operand
}

double reproducing_check(const GnsSpace& space, std::span<const Eigen::VectorXcd> functions,
                         std::span<const Eigen::VectorXcd> coefficients) {
  const auto n = static_cast<Eigen::Index>(space.samples.size());
  double worst = 0;
  for (const auto& f : functions) {
    if (f.size() != n) throw Error(ErrorCode::InvalidParameter, "reproducing_check: function not on the samples");
    // f evaluated at each sample by direct expansion over the state
    Eigen::VectorXcd values(n);
    for (Eigen::Index s = 0; s < n; ++s) {
      const GroupElement si = inverse(space.samples[s]);
      cplx acc{};
      for (Eigen::Index t = 0; t < n; ++t) acc += f[t] * space.state(compose(si, space.samples[t]));
      values[s] = acc;
    }
    const Eigen::VectorXcd fc = space.coordinates * f;
    for (const auto& c : coefficients) {
      if (c.size() != n) throw Error(ErrorCode::InvalidParameter, "reproducing_check: coefficients not on the samples");
      const cplx direct = c.dot(values);
      const cplx via_gns = (space.coordinates * c).dot(fc);
      worst = std::max(worst, std::abs(direct - via_gns));
    }
  }
  return worst;
}

std::string_view to_string(CommutantPolicy p) noexcept {
  return p == CommutantPolicy::Strict ? "strict" : "compressed";
}

CommutantReport commutant_dim(const GnsSpace& space, std::span<const GroupElement> generators,
                              CommutantPolicy policy, const Tolerances& tol) {
  CommutantReport rep;
  rep.policy = policy;
  const auto r = static_cast<Eigen::Index>(space.rank);
  if (r <= 1 || generators.empty()) {
    rep.dimension = static_cast<std::size_t>(r * r);
    return rep;
  }
  const Eigen::Index r2 = r * r;
  Eigen::MatrixXcd stacked(r2 * static_cast<Eigen::Index>(generators.size()), r2);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(r, r);
  Eigen::Index row = 0;
  for (const auto& g : generators) {
    const RepMatrix pi = rep_matrix(space, g);
    rep.max_residual = std::max(rep.max_residual, pi.residual);
    if (policy == CommutantPolicy::Strict && pi.residual > tol.rep_residual) {
      throw Error(ErrorCode::ResidualPrecondition,
                  "commutant_dim: generator does not preserve the sample span (residual " +
                      scientific(pi.residual) + ")");
    }
    // vec(X P - P X) = (P^T kron I - I kron P) vec(X), column-major vec
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index b = 0; b < r; ++b) {
        stacked.block(row + a * r, b * r, r, r) = pi.matrix(b, a) * I;
      }
    }
    for (Eigen::Index b = 0; b < r; ++b) stacked.block(row + b * r, b * r, r, r) -= pi.matrix;
    row += r2;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(stacked);
  const Eigen::VectorXd sv = svd.singularValues();
  std::size_t nonzero = 0;
  rep.smallest_nonzero_singular = INFINITY;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol.commutant_singular) {
      ++nonzero;
      rep.smallest_nonzero_singular = std::min(rep.smallest_nonzero_singular, sv[i]);
    }
  }
  rep.dimension = static_cast<std::size_t>(r2) - nonzero;
  return rep;
}

double eigenvector_check(const GnsSpace& space, std::span<const GroupElement> subgroup_samples,
                         std::span<const cplx> characters, const Tolerances& tol) {
  if (subgroup_samples.size() != characters.size()) {
    throw Error(ErrorCode::InvalidParameter, "eigenvector_check: one character value per subgroup sample");
  }
  double worst = 0;
  for (std::size_t i = 0; i < subgroup_samples.size(); ++i) {
    const RepMatrix pi = rep_matrix(space, subgroup_samples[i]);
    if (pi.residual > tol.rep_residual) {
      throw Error(ErrorCode::ResidualPrecondition,
                  "eigenvector_check: subgroup element leaves the sample span (residual " + scientific(pi.residual) + ")");
    }
    worst = std::max(worst, (pi.matrix * space.cyclic - characters[i] * space.cyclic).norm());
  }
  return worst;
}

}  // namespace qstates
