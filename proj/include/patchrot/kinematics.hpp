#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "patchrot/rotation.hpp"
#include "patchrot/vec.hpp"

namespace patchrot {

/// Body-frame angular velocity in rad/s.
using AngularVelocity = Vec3;

/// Raised when a time step cannot be completed (degenerate difference-step
/// denominator). `t` carries the failing time when the caller knows it.
struct StepError : std::runtime_error {
  explicit StepError(const std::string& what,
                     double time = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), t(time) {}
  double t;
};

/// Quaternion rate matrix: d/dt q = (1/2) H(omega) q, body-frame rates.
/// Skew-symmetric by construction.
constexpr Mat4 h_matrix(const Vec3& omega) {
  const double w1 = omega.x, w2 = omega.y, w3 = omega.z;
  return {{{{0.0, -w1, -w2, -w3},
            {w1, 0.0, w3, -w2},
            {w2, -w3, 0.0, w1},
            {w3, w2, -w1, 0.0}}}};
}

/// Column i of H with its zero diagonal entry removed: the three rate
/// components that drive chart coordinates in patch i. Every entry is an
/// angular-velocity component copied with at most a sign flip, so identities
/// against h_matrix hold bitwise.
inline Vec3 w_column(const Vec3& omega, int i) {
  switch (i) {
    case 0: return {omega.x, omega.y, omega.z};
    case 1: return {-omega.x, -omega.z, omega.y};
    case 2: return {-omega.y, omega.z, -omega.x};
    case 3: return {-omega.z, -omega.y, omega.x};
    default: throw std::domain_error("w_column: patch index must be in {0,1,2,3}");
  }
}

/// H together with all four W columns, for callers that want them at once.
struct RateMatrices {
  Mat4 h;
  std::array<Vec3, 4> w;
};

inline RateMatrices rate_matrices(const Vec3& omega) {
  return {h_matrix(omega),
          {w_column(omega, 0), w_column(omega, 1), w_column(omega, 2), w_column(omega, 3)}};
}

namespace detail {

inline constexpr std::uint64_t kSignBit = 0x8000'0000'0000'0000ull;

/// XOR the sign bit: exact negation with no multiply and no branch.
inline double flip_sign(double a, std::uint64_t mask) {
  return std::bit_cast<double>(std::bit_cast<std::uint64_t>(a) ^ mask);
}

/// Sign mask for (-1)^(i+1): identity for odd i, negation for even i.
constexpr std::uint64_t cross_sign_mask(int patch_index) {
  return (patch_index & 1) ? 0ull : kSignBit;
}

struct WSelect {
  int p0, p1, p2;
  std::uint64_t m0, m1, m2;
};

/// Signed permutations realizing the four W columns.
inline constexpr WSelect kWSelect[4] = {
    {0, 1, 2, 0ull, 0ull, 0ull},
    {0, 2, 1, kSignBit, kSignBit, 0ull},
    {1, 2, 0, kSignBit, 0ull, kSignBit},
    {2, 1, 0, kSignBit, kSignBit, 0ull},
};

/// Table-driven w_column (no index validation). Bitwise-identical to
/// w_column; used by the scalar helpers (beta, scale_factor) where a data
/// lookup reads more naturally than a four-way branch.
inline Vec3 w_column_unchecked(const Vec3& omega, int i) {
  const double o[3] = {omega.x, omega.y, omega.z};
  const WSelect& s = kWSelect[i];
  return {flip_sign(o[s.p0], s.m0), flip_sign(o[s.p1], s.m1), flip_sign(o[s.p2], s.m2)};
}

struct PatchFlow {
  Vec3 numerator;  // w + (w.x) x + (-1)^(i+1) w cross x for the w passed in
  double d;        // w . x
};

/// Shared core of patch_rhs and patch_delta. Both must build the identical
/// numerator value so that their quotient identity holds to a few ulps per
/// component even where the components nearly cancel.
/// Exactly 12 multiplications: 3 (dot) + 6 (cross) + 3 (scale of x).
inline PatchFlow patch_flow(const Vec3& w, const Vec3& x, std::uint64_t cross_mask) {
  const double d = dot(w, x);
  const Vec3 c = cross(w, x);
  return {{w.x + d * x.x + flip_sign(c.x, cross_mask),
           w.y + d * x.y + flip_sign(c.y, cross_mask),
           w.z + d * x.z + flip_sign(c.z, cross_mask)},
          d};
}

/// patch_flow of patch I evaluated on the HALF-scaled column w' = W_I / 2,
/// with the signed permutation that builds w' folded into compile-time
/// +-0.5 constants. Scaling by a power of two is exact, and every operation
/// in patch_flow commutes with an exact scaling of w, so the result is
/// bitwise half of patch_flow(W_I, x): numerator == N/2 and d == (W_I.x)/2.
/// This serves patch_rhs directly (which wants N/2) and lets patch_delta
/// halve its quotient top and bottom; the per-patch instantiation keeps the
/// kernel a straight line of scalar arithmetic with no permutation lookup.
template <int I>
inline PatchFlow half_patch_flow(const Vec3& omega, const Vec3& x) {
  static_assert(I >= 0 && I < 4);
  Vec3 w;
  if constexpr (I == 0) {
    w = {0.5 * omega.x, 0.5 * omega.y, 0.5 * omega.z};
  } else if constexpr (I == 1) {
    w = {-0.5 * omega.x, -0.5 * omega.z, 0.5 * omega.y};
  } else if constexpr (I == 2) {
    w = {-0.5 * omega.y, 0.5 * omega.z, -0.5 * omega.x};
  } else {
    w = {-0.5 * omega.z, -0.5 * omega.y, 0.5 * omega.x};
  }
  return patch_flow(w, x, cross_sign_mask(I));
}

inline PatchFlow half_flow(int i, const Vec3& omega, const Vec3& x) {
  switch (i) {
    case 0: return half_patch_flow<0>(omega, x);
    case 1: return half_patch_flow<1>(omega, x);
    case 2: return half_patch_flow<2>(omega, x);
    default: return half_patch_flow<3>(omega, x);
  }
}

}  // namespace detail

/// Right-hand side of the quaternion kinematic ODE, (1/2) H(omega) q,
/// expanded to the 12-multiplication form
///   (1/2) (-omega . v,  s omega + v cross omega).
/// Valid for non-unit q as well (the flow preserves the norm only in exact
/// arithmetic; numerically the norm drifts, which is the baseline's burden).
inline Quat quat_rhs(const Quat& q, const Vec3& omega) {
  const Quat dq{-dot(q.v, omega), q.s * omega + cross(q.v, omega)};
  return 0.5 * dq;
}

/// Logarithmic length-rate of the homogeneous representative in patch i:
/// beta = (1/2) (W_i . x). Subtracting beta times the representative from
/// the homogeneous flow is what pins the pivot coordinate at 1.
inline double beta(const Vec3& x, const Vec3& omega, int i) {
  assert(i >= 0 && i < 4);
  return 0.5 * dot(detail::w_column_unchecked(omega, i), x);
}

/// Right-hand side of the chart ODE in patch i:
///   dx/dt = (1/2) [ W_i + (W_i . x) x + (-1)^(i+1) (W_i cross x) ].
/// 12 multiplications with the leading 1/2 distributed exactly onto W_i (a
/// power-of-two scaling, so the value is bit-identical to halving at the
/// end); the remaining signs are bit flips, not multiplies. Accepts
/// unbounded x; keeping x small is the integrator's switching policy, not a
/// kinematics concern.
inline Vec3 patch_rhs(const PatchRotation& p, const Vec3& omega) {
  assert(p.patch_index >= 0 && p.patch_index < 4);
  return detail::half_flow(p.patch_index, omega, p.x).numerator;
}

/// Exact first-order difference step in patch i:
///   dx = dt [ W_i + (-1)^(i+1)(W_i cross x) + (W_i . x) x ] / [ 2 - (W_i . x) dt ].
/// This reproduces a forward-Euler step of the quaternion ODE, re-projected
/// into the chart, with no normalization anywhere: x + dx equals
/// to_patch(q + quat_rhs(q, omega) dt, i) for q = patch_to_quat(p).
/// Throws StepError when the denominator is degenerate, which requires
/// |W_i . x| dt ~ 2 — a grossly oversized step.
inline Vec3 patch_delta(const PatchRotation& p, const Vec3& omega, double dt) {
  assert(p.patch_index >= 0 && p.patch_index < 4);
  const detail::PatchFlow f = detail::half_flow(p.patch_index, omega, p.x);
  // Quotient halved top and bottom (exactly): f carries N/2 and (W_i . x)/2,
  // so den here is [2 - (W_i . x) dt] / 2 and the guard threshold is halved
  // to reject precisely the same steps.
  const double den = 1.0 - f.d * dt;
  if (std::fabs(den) < 5e-13) {
    throw StepError("patch Euler step degenerate; reduce dt or switch patch");
  }
  return {(dt * f.numerator.x) / den, (dt * f.numerator.y) / den,
          (dt * f.numerator.z) / den};
}

/// The projective scale change absorbed by one difference step:
///   scale_factor = 1 - (W_i . x) dt / 2,
/// so that patch_delta / dt == patch_rhs / scale_factor wherever it is
/// nonzero. Computed as 1 - (d dt)/2 with the same dot product d as the
/// kernels above, making the identity exact up to final-division rounding.
inline double scale_factor(const PatchRotation& p, const Vec3& omega, double dt) {
  assert(p.patch_index >= 0 && p.patch_index < 4);
  const Vec3 w = detail::w_column_unchecked(omega, p.patch_index);
  return 1.0 - (dot(w, p.x) * dt) * 0.5;
}

}  // namespace patchrot
