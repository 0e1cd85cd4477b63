#pragma once

#include <cstdint>
#include <random>

#include "qstates/lie.hpp"

namespace qstates {

using Rng = std::mt19937_64;

/// Per-trial generator; trial streams are derived as seed ^ trial.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) { return Rng(seed ^ trial); }

double uniform(Rng& rng, double lo, double hi);
Vec3 random_unit_vector(Rng& rng);
/// Haar-distributed rotation.
Mat3 random_rotation(Rng& rng);

/// Generic element: nilpotent coordinates and translations uniform in
/// [-scale, scale]; rotations and SU(2) elements Haar distributed.
GroupElement random_group_element(Family f, Rng& rng, double scale = 3.0, std::size_t torus_dim = 1);
AlgebraElement random_algebra_element(Family f, Rng& rng, double scale = 1.0, std::size_t torus_dim = 1);
CoadjointVector random_coadjoint(Family f, Rng& rng, double scale = 1.0, std::size_t torus_dim = 1);

}  // namespace qstates
