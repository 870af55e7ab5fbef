#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace patchrot {

/// Real projective n-space RP^n, covered by the n+1 affine patches
///
///   V_k = { [z^0 : ... : z^n] : z^k != 0 },   k = 0..n.
///
/// The chart on V_k divides through by z^k and drops the k-th slot, leaving
/// n affine coordinates. Every projective point lies in at least one patch,
/// so switching to the patch whose pivot component is largest keeps chart
/// coordinates uniformly bounded; that is the whole mechanism this library
/// builds on for rotations (n = 3).

/// A point of RP^n as a homogeneous coordinate vector (never all zero).
/// Two coordinate vectors describe the same point iff one is a nonzero
/// scalar multiple of the other.
template <std::size_t N>
struct HomogeneousPoint {
  std::array<double, N + 1> z{};
};

/// A point expressed in affine patch `patch_index` with its n chart
/// coordinates.
template <std::size_t N>
struct PatchPoint {
  std::size_t patch_index = 0;
  std::array<double, N> x{};
};

/// Components with magnitude at or below this floor are treated as zero when
/// deciding whether a point lies inside a patch. It guards against dividing
/// by a denormal pivot, which would overflow every chart coordinate.
inline constexpr double kDenominatorFloor = 1e-300;

/// Chart map of patch k: divide by the pivot z^k and drop slot k.
/// Throws std::domain_error when the point is outside the patch.
template <std::size_t N>
std::array<double, N> to_patch(const HomogeneousPoint<N>& p, std::size_t k,
                               double denominator_floor = kDenominatorFloor) {
  assert(k <= N);
  const double pivot = p.z[k];
  if (!(std::fabs(pivot) > denominator_floor)) {
    throw std::domain_error("to_patch: point lies outside patch " + std::to_string(k) +
                            " (pivot component is zero or below the floor)");
  }
  std::array<double, N> x{};
  std::size_t out = 0;
  for (std::size_t j = 0; j <= N; ++j) {
    if (j == k) continue;
    x[out++] = p.z[j] / pivot;
  }
  return x;
}

/// Inverse chart map: re-insert 1 at slot k. Exact in floating point.
template <std::size_t N>
HomogeneousPoint<N> from_patch(const std::array<double, N>& x, std::size_t k) {
  assert(k <= N);
  HomogeneousPoint<N> p;
  std::size_t in = 0;
  for (std::size_t j = 0; j <= N; ++j) {
    p.z[j] = (j == k) ? 1.0 : x[in++];
  }
  return p;
}

/// Index of the patch whose pivot has the largest magnitude; ties resolve to
/// the smallest index. Chart coordinates in that patch are bounded by 1 in
/// magnitude. Throws std::domain_error for the (invalid) all-zero vector.
template <std::size_t N>
std::size_t best_patch(const HomogeneousPoint<N>& p) {
  std::size_t best = 0;
  double best_mag = std::fabs(p.z[0]);
  for (std::size_t j = 1; j <= N; ++j) {
    const double mag = std::fabs(p.z[j]);
    if (mag > best_mag) {
      best = j;
      best_mag = mag;
    }
  }
  if (best_mag == 0.0) {
    throw std::domain_error("best_patch: all homogeneous components are zero");
  }
  return best;
}

/// True when any chart coordinate strictly exceeds the threshold, i.e. the
/// point has wandered far enough from the patch centre that re-charting is
/// worthwhile. Callers keep threshold >= 1 so that the re-charted
/// coordinates (bounded by 1) never trigger an immediate second switch.
template <std::size_t N>
bool needs_switch(const std::array<double, N>& x, double threshold) {
  assert(threshold >= 1.0);
  for (std::size_t j = 0; j < N; ++j) {
    if (std::fabs(x[j]) > threshold) return true;
  }
  return false;
}

/// Re-express a point in the best patch for its current position. Never
/// throws for finite input: the homogeneous lift has a component exactly 1,
/// so the new pivot magnitude is at least 1 and the divisions are safe.
template <std::size_t N>
PatchPoint<N> switch_patch(const std::array<double, N>& x, std::size_t k_from) {
  const HomogeneousPoint<N> p = from_patch<N>(x, k_from);
  const std::size_t k_to = best_patch<N>(p);
  return {k_to, to_patch<N>(p, k_to)};
}

/// True when a and b are the same projective point to within `tol`:
/// normalizing each by its own largest-magnitude component (with sign)
/// cancels scale and overall sign, leaving directly comparable vectors.
template <std::size_t N>
bool projectively_equal(const HomogeneousPoint<N>& a, const HomogeneousPoint<N>& b,
                        double tol = 1e-12) {
  const double pa = a.z[best_patch<N>(a)];
  const double pb = b.z[best_patch<N>(b)];
  for (std::size_t j = 0; j <= N; ++j) {
    if (std::fabs(a.z[j] / pa - b.z[j] / pb) > tol) return false;
  }
  return true;
}

}  // namespace patchrot
