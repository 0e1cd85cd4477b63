#pragma once

// Canonical coordinates, group laws, exp/log, brackets and (co)adjoint
// actions for the five concrete families:
//
//   Heisenberg  (a,b,c)     <->  [[1,b,a],[0,1,c],[0,0,1]]
//   Bargmann    (a,b,c,e)   <->  [[1,b,b^2/2,a],[0,1,b,c],[0,0,1,e],[0,0,0,1]]
//   Euclid      (A,c)       <->  [[A,c],[0,1]],  A in SO(3)
//   SU2         (w,x,y,z)   <->  w*1 + i(x s1 + y s2 + z s3), unit norm
//   Torus       angles      <->  diag(e^{i theta_k})
//
// Algebra coordinates:
//   Heisenberg (alpha,beta,gamma), Bargmann (alpha,beta,gamma,epsilon),
//   Euclid (rotation axis alpha[3], translation rate gamma[3]) <-> [[j(alpha),gamma],[0,0]],
//   SU2 x[3] <-> sum_k x_k (i/2) s_k,  Torus t[d].
//
// Dual coordinates and pairings:
//   Heisenberg (M,p,q)     <w,Z> = p gamma - q beta - M alpha
//   Bargmann   (M,p,q,E)   <w,Z> = p gamma - q beta - E epsilon - M alpha
//   Euclid     (L[3],P[3]) <w,Z> = <L,alpha> + <P,gamma>
//   SU2        x[3]        <w,Z> = <x,z>
//   Torus      y[d]        <w,Z> = <y,t>

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qstates/config.hpp"

namespace qstates {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Family { Heisenberg, Bargmann, Euclid, SU2, Torus };

std::string_view to_string(Family f) noexcept;
Family family_from_string(std::string_view name);

struct HeisenbergElement {
  double a = 0, b = 0, c = 0;
};

struct BargmannElement {
  double a = 0, b = 0, c = 0, e = 0;
};

struct EuclidElement {
  Mat3 A = Mat3::Identity();
  Vec3 c = Vec3::Zero();
  // Compositions since the rotation block was last re-orthonormalized.
  int drift = 0;
};

struct SU2Element {
  double w = 1, x = 0, y = 0, z = 0;
  // Entries of [[alpha, -conj(beta)], [beta, conj(alpha)]].
  cplx alpha() const { return {w, z}; }
  cplx beta() const { return {-y, x}; }
};

struct TorusElement {
  std::vector<double> angles;  // each reduced to [0, 2 pi)
};

class GroupElement {
 public:
  using Storage = std::variant<HeisenbergElement, BargmannElement, EuclidElement, SU2Element, TorusElement>;

  GroupElement() : value_(HeisenbergElement{}) {}
  GroupElement(HeisenbergElement g) : value_(g) {}
  GroupElement(BargmannElement g) : value_(g) {}
  GroupElement(EuclidElement g);
  GroupElement(SU2Element g);
  GroupElement(TorusElement g);

  static GroupElement identity(Family f, std::size_t torus_dim = 1);

  Family family() const noexcept { return static_cast<Family>(value_.index()); }
  const Storage& storage() const noexcept { return value_; }

  // Throws Error{FamilyMismatch} when the element belongs to another family.
  const HeisenbergElement& heisenberg() const;
  const BargmannElement& bargmann() const;
  const EuclidElement& euclid() const;
  const SU2Element& su2() const;
  const TorusElement& torus() const;

 private:
  Storage value_;
};

/// Lie-algebra vector; coordinates in the family's basis (see header comment).
struct AlgebraElement {
  Family family = Family::Heisenberg;
  Eigen::VectorXd coords;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(double s) const;
  double norm() const { return coords.norm(); }
};

/// Dual vector; coordinates as in the header comment.
struct CoadjointVector {
  Family family = Family::Heisenberg;
  Eigen::VectorXd coords;
};

// Convenience constructors.
AlgebraElement heisenberg_algebra(double alpha, double beta, double gamma);
AlgebraElement bargmann_algebra(double alpha, double beta, double gamma, double epsilon);
AlgebraElement euclid_algebra(const Vec3& rotation, const Vec3& translation);
AlgebraElement su2_algebra(const Vec3& x);
AlgebraElement torus_algebra(std::vector<double> t);
AlgebraElement zero_algebra(Family f, std::size_t torus_dim = 1);

CoadjointVector heisenberg_dual(double M, double p, double q);
CoadjointVector bargmann_dual(double M, double p, double q, double E);
CoadjointVector euclid_dual(const Vec3& L, const Vec3& P);
CoadjointVector su2_dual(const Vec3& x);
CoadjointVector torus_dual(std::vector<double> y);

std::size_t algebra_dimension(Family f, std::size_t torus_dim = 1) noexcept;

Vec3 euclid_rotation_part(const AlgebraElement& Z);
Vec3 euclid_translation_part(const AlgebraElement& Z);

/// Rotation by `angle` about the unit vector along `axis` (Rodrigues).
Mat3 rotation_about(const Vec3& axis, double angle);
Mat3 hat(const Vec3& v);
Vec3 vee(const Mat3& m);

EuclidElement make_euclid(const Mat3& A, const Vec3& c, const Tolerances& tol = kDefaultTolerances);
SU2Element make_su2(double w, double x, double y, double z, const Tolerances& tol = kDefaultTolerances);
/// exp(angle * (unit axis) . (i/2) sigma).
SU2Element su2_axis_angle(const Vec3& axis, double angle);
/// Image of g in SO(3) under Ad: Ad(g) Z = R Z in the su(2) coordinates above.
Mat3 su2_rotation(const SU2Element& g);
/// The diagonal torus element diag(e^{i theta/2}, e^{-i theta/2}).
SU2Element su2_torus(double theta);

/// Throws Error{InvalidElement} when an element violates its family invariants.
void validate(const GroupElement& g, const Tolerances& tol = kDefaultTolerances);

GroupElement compose(const GroupElement& g, const GroupElement& h, const Tolerances& tol = kDefaultTolerances);
GroupElement inverse(const GroupElement& g);
GroupElement exp(const AlgebraElement& Z);
/// Principal logarithm. Euclid/SU2 refuse rotation angles >= pi - tol.log_branch.
AlgebraElement log(const GroupElement& g, const Tolerances& tol = kDefaultTolerances);
AlgebraElement bracket(const AlgebraElement& Z, const AlgebraElement& W);
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& Z);
/// Ad*(g) w, defined by <Ad*(g) w, Z> = <w, Ad(g^{-1}) Z>.
CoadjointVector coadjoint(const GroupElement& g, const CoadjointVector& w);
double pair(const CoadjointVector& w, const AlgebraElement& Z);
bool commuting(std::span<const AlgebraElement> Zs, const Tolerances& tol = kDefaultTolerances);

/// Max-abs coordinate distance (angles compared mod 2 pi). Throws on family mismatch.
double distance(const GroupElement& g, const GroupElement& h);
bool is_identity(const GroupElement& g, double tol);

}  // namespace qstates
