#include "qstates/sampling.hpp"

#include <numbers>

namespace qstates {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> n;
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

GroupElement random_group_element(Family f, Rng& rng, double scale, std::size_t torus_dim) {
  auto u = [&] { return uniform(rng, -scale, scale); };
  switch (f) {
    case Family::Heisenberg: {
      const double a = u(), b = u(), c = u();
      return HeisenbergElement{a, b, c};
    }
    case Family::Bargmann: {
      const double a = u(), b = u(), c = u(), e = u();
      return BargmannElement{a, b, c, e};
    }
    case Family::Euclid: {
      const Mat3 A = random_rotation(rng);
      const double x = u(), y = u(), z = u();
      return EuclidElement{A, Vec3(x, y, z), 0};
    }
    case Family::SU2: {
      std::normal_distribution<double> n;
      Eigen::Vector4d q(n(rng), n(rng), n(rng), n(rng));
      q.normalize();
      return SU2Element{q[0], q[1], q[2], q[3]};
    }
    case Family::Torus: {
      std::vector<double> t(torus_dim);
      for (double& x : t) x = uniform(rng, 0.0, 2 * std::numbers::pi);
      return TorusElement{t};
    }
  }
  return {};
}

AlgebraElement random_algebra_element(Family f, Rng& rng, double scale, std::size_t torus_dim) {
  AlgebraElement Z = zero_algebra(f, torus_dim);
  for (Eigen::Index i = 0; i < Z.coords.size(); ++i) Z.coords[i] = uniform(rng, -scale, scale);
  return Z;
}

CoadjointVector random_coadjoint(Family f, Rng& rng, double scale, std::size_t torus_dim) {
  CoadjointVector w{f, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(algebra_dimension(f, torus_dim)))};
  for (Eigen::Index i = 0; i < w.coords.size(); ++i) w.coords[i] = uniform(rng, -scale, scale);
  return w;
}

}  // namespace qstates
