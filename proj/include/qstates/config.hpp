#pragma once

// Numerical tolerances shared by every module. Acceptance runs read these
// defaults; callers that need something else pass a modified copy.

namespace qstates {

struct Tolerances {
  // lie-core
  double group_identity = 1e-12;   // compose(g, inverse(g)) == e
  double exp_series = 1e-10;       // exp vs. truncated matrix series
  double log_branch = 1e-9;        // principal log refuses angle >= pi - this
  double commuting = 1e-10;        // pairwise bracket norm
  double orthogonality = 1e-12;    // Euclid A^T A == I, SU(2) unit norm
  int reorthonormalize_every = 64; // Euclid compositions between re-orthonormalizations

  // states
  double delta = 1e-9;           // membership predicates (b == 0, A e3 == +-e3, ...)
  double psd_per_sample = 1e-9;  // min eigenvalue >= -psd_per_sample * n
  double inequality_slack = 1e-12;
  double modulus_one = 1e-9;

  // gns
  double rep_residual = 1e-9;
  double commutant_singular = 1e-8;
  double reproducing = 1e-10;

  // orbits
  double orbit_relation = 1e-10;
  double check_margin = 1e-6;

  // spectral
  double concentration_eps = 1e-3;   // neighbourhood radius in frequency
  double concentration_mass = 1e-3;  // allowed mass outside the neighbourhood
  double atom_leakage_factor = 5.0;  // atom iff mass > factor * leakage bound
  double mixed_residual = 0.10;      // unexplained mass above this => mixed
  double prequant_convergence = 1e-3;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qstates
