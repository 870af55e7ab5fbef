#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "patchrot/projective.hpp"
#include "patchrot/vec.hpp"

namespace patchrot {

/// Rotations as points of RP^3.
///
/// Unit quaternions double-cover SO(3): q and -q are the same rotation, so a
/// rotation is really a projective equivalence class [q0 : q1 : q2 : q3].
/// Working in an affine patch of RP^3 removes both the unit-norm constraint
/// and the double cover, leaving exactly three unconstrained coordinates.

/// Plain quaternion s + v.x*i + v.y*j + v.z*k with no norm constraint.
/// Component order everywhere is (s, v.x, v.y, v.z).
struct Quat {
  double s = 1.0;
  Vec3 v{};
};

constexpr Quat operator+(const Quat& a, const Quat& b) { return {a.s + b.s, a.v + b.v}; }
constexpr Quat operator-(const Quat& a, const Quat& b) { return {a.s - b.s, a.v - b.v}; }
constexpr Quat operator*(double c, const Quat& a) { return {c * a.s, c * a.v}; }
constexpr Quat operator*(const Quat& a, double c) { return c * a; }
constexpr double dot(const Quat& a, const Quat& b) { return a.s * b.s + dot(a.v, b.v); }
inline double norm(const Quat& a) { return std::sqrt(dot(a, a)); }
constexpr Quat conjugate(const Quat& a) { return {a.s, -a.v}; }

constexpr std::array<double, 4> to_array(const Quat& a) {
  return {a.s, a.v.x, a.v.y, a.v.z};
}
constexpr Quat quat_from_array(const std::array<double, 4>& c) {
  return {c[0], {c[1], c[2], c[3]}};
}

/// Hamilton product a*b (right-to-left composition: the rotation of b
/// happens first when rotating column vectors by quat_to_matrix).
constexpr Quat hamilton(const Quat& a, const Quat& b) {
  return {a.s * b.s - dot(a.v, b.v), a.s * b.v + b.s * a.v + cross(a.v, b.v)};
}

/// Quaternion constrained to unit norm; the constructor normalizes.
class UnitQuaternion {
 public:
  /// Identity rotation.
  UnitQuaternion() = default;

  /// Normalizes q. Throws std::domain_error when |q| is too small for the
  /// division to be meaningful.
  explicit UnitQuaternion(const Quat& q) {
    const double n = norm(q);
    if (!(n > 1e-150)) {
      throw std::domain_error("UnitQuaternion: cannot normalize a near-zero quaternion");
    }
    q_ = (1.0 / n) * q;
  }
  UnitQuaternion(double s, const Vec3& v) : UnitQuaternion(Quat{s, v}) {}

  const Quat& value() const {
    assert(std::fabs(norm(q_) - 1.0) <= 1e-12);
    return q_;
  }
  double scalar() const { return q_.s; }
  const Vec3& vector() const { return q_.v; }

 private:
  Quat q_{1.0, {0.0, 0.0, 0.0}};
};

/// A rotation in affine-patch coordinates: patch index i in {0,1,2,3} plus
/// three unconstrained chart coordinates. In patch i the homogeneous lift is
/// the quaternion component vector with 1 re-inserted at slot i.
struct PatchRotation {
  int patch_index = 0;
  Vec3 x{};
};

/// Cross-product (skew-symmetric) matrix: skew(v) * u == cross(v, u).
constexpr Mat3 skew(const Vec3& v) {
  return {{{{0.0, -v.z, v.y}, {v.z, 0.0, -v.x}, {-v.y, v.x, 0.0}}}};
}

namespace detail {

/// Rotation matrix of a quaternion assumed to have unit norm. Applying it to
/// a quaternion that has drifted off the unit sphere produces a matrix that
/// is not orthogonal; the drift shows up directly in the orthogonality
/// defect, which is exactly what run reports want to record.
constexpr Mat3 rotation_matrix_unit_formula(const Quat& q) {
  const double s = q.s;
  const Vec3& v = q.v;
  const double d = 2.0 * s * s - 1.0;
  Mat3 r = skew(v);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r.m[a][b] = 2.0 * s * r.m[a][b];
  const std::array<double, 3> vv = to_array(v);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      r.m[a][b] += 2.0 * vv[a] * vv[b];
    }
    r.m[a][a] += d;
  }
  return r;
}

}  // namespace detail

/// Rotation matrix R(q) = (2s^2 - 1) I + 2 v v^T + 2 s skew(v), acting on
/// column vectors. R is orthogonal with det +1.
inline Mat3 quat_to_matrix(const UnitQuaternion& q) {
  return detail::rotation_matrix_unit_formula(q.value());
}

/// Chart coordinates of the rotation q, using the best (largest-pivot)
/// patch, so the result always has max |x_j| <= 1.
inline PatchRotation quat_to_patch(const UnitQuaternion& q) {
  const HomogeneousPoint<3> p{to_array(q.value())};
  const std::size_t k = best_patch<3>(p);
  return {static_cast<int>(k), vec3_from_array(to_patch<3>(p, k))};
}

/// The unit quaternion (up to overall sign) of a patch point: lift to
/// homogeneous coordinates and normalize. The lifted pivot is +1, which
/// pins one sign convention of the double cover.
inline UnitQuaternion patch_to_quat(const PatchRotation& p) {
  assert(p.patch_index >= 0 && p.patch_index < 4);
  const HomogeneousPoint<3> h =
      from_patch<3>(to_array(p.x), static_cast<std::size_t>(p.patch_index));
  return UnitQuaternion(quat_from_array(h.z));
}

/// Rotation matrix straight from chart coordinates, without normalizing:
///
///   R = [ (s^2 - |v|^2) I + 2 v v^T + 2 s skew(v) ] / (s^2 + |v|^2)
///
/// is scale-invariant in (s, v), so the un-normalized homogeneous lift can
/// be used as-is; one division replaces the square root.
inline Mat3 patch_to_matrix(const PatchRotation& p) {
  assert(p.patch_index >= 0 && p.patch_index < 4);
  const HomogeneousPoint<3> h =
      from_patch<3>(to_array(p.x), static_cast<std::size_t>(p.patch_index));
  const Quat q = quat_from_array(h.z);
  const double s2 = q.s * q.s;
  const double v2 = dot(q.v, q.v);
  const double n2 = s2 + v2;

  Mat3 r = skew(q.v);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r.m[a][b] = 2.0 * q.s * r.m[a][b];
  const std::array<double, 3> vv = to_array(q.v);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      r.m[a][b] += 2.0 * vv[a] * vv[b];
    }
    r.m[a][a] += s2 - v2;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r.m[a][b] /= n2;
  return r;
}

/// How far a matrix is from being orthogonal: ||R^T R - I||_F. Zero (to
/// rounding) for every matrix this module produces from a unit quaternion
/// or any patch point.
inline double orthogonality_defect(const Mat3& r) {
  return frobenius_norm(transpose(r) * r - Mat3::identity());
}

/// Unit quaternion of a rotation by angle |omega| * t about axis omega/|omega|
/// (body-frame axis held fixed): the exponential (cos(theta/2),
/// sin(theta/2) * axis). Small angles use the series limit sin(x)/x -> 1 to
/// avoid 0/0 in the axis normalization.
inline UnitQuaternion quat_exp_body(const Vec3& omega, double t) {
  const double w = norm(omega);
  const double theta = w * t;
  if (std::fabs(theta) < 1e-8) {
    // sin(theta/2)/w -> t/2 as theta -> 0; relative error below 1e-17 here.
    return UnitQuaternion(Quat{std::cos(0.5 * theta), (0.5 * t) * omega});
  }
  return UnitQuaternion(Quat{std::cos(0.5 * theta), (std::sin(0.5 * theta) / w) * omega});
}

/// Geodesic distance on SO(3): the absolute rotation angle of q1^-1 * q2,
/// insensitive to the sign of either argument. Computed from the relative
/// quaternion with atan2 rather than arccos of |dot|; the two agree exactly
/// in real arithmetic, but arccos near 1 loses half the significant digits
/// and cannot resolve distances below ~1e-8.
inline double geodesic_distance(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  const Quat rel = hamilton(conjugate(q1.value()), q2.value());
  return 2.0 * std::atan2(norm(rel.v), std::fabs(rel.s));
}

}  // namespace patchrot
