#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "patchrot/kinematics.hpp"
#include "patchrot/projective.hpp"
#include "patchrot/rotation.hpp"
#include "patchrot/vec.hpp"

namespace patchrot {

/// Fixed-step attitude integration. The patch schemes integrate the chart
/// ODE / difference step directly and re-chart whenever a coordinate grows
/// past the switch threshold; the quaternion schemes are the conventional
/// baseline, kept honest by an explicit renormalization policy.

enum class Scheme { PatchEuler, PatchRk4, QuatEuler, QuatRk4 };

constexpr bool is_patch_scheme(Scheme s) {
  return s == Scheme::PatchEuler || s == Scheme::PatchRk4;
}

constexpr std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PatchEuler: return "patch-euler";
    case Scheme::PatchRk4: return "patch-rk4";
    case Scheme::QuatEuler: return "quat-euler";
    case Scheme::QuatRk4: return "quat-rk4";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "patch-euler") return Scheme::PatchEuler;
  if (name == "patch-rk4") return Scheme::PatchRk4;
  if (name == "quat-euler") return Scheme::QuatEuler;
  if (name == "quat-rk4") return Scheme::QuatRk4;
  throw std::invalid_argument(
      "unknown scheme '" + std::string(name) +
      "' (expected patch-euler, patch-rk4, quat-euler or quat-rk4)");
}

struct StepperConfig {
  Scheme scheme = Scheme::PatchEuler;
  double dt = 1e-3;
  double switch_threshold = 2.0;
  // Quaternion schemes renormalize after every renormalize_every-th step;
  // 0 disables renormalization entirely. Ignored by patch schemes, which
  // have nothing to renormalize.
  int renormalize_every = 1;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("stepper config: dt must be > 0");
    if (!(switch_threshold >= 1.0))
      throw std::invalid_argument("stepper config: switch-threshold must be >= 1");
    if (renormalize_every < 0)
      throw std::invalid_argument(
          "stepper config: renormalize-every must be >= 0 (0 = never)");
  }
};

struct StepDiagnostics {
  bool switched = false;
  int patch_index_after = -1;  // -1 for quaternion states
  double max_abs_coordinate = 0.0;
  double quat_norm_drift = 0.0;  // |'norm' - 1| of the stored quaternion
};

/// Attitude at a time instant, in whichever representation the active scheme
/// propagates. The quaternion alternative stores the raw components rather
/// than a normalized wrapper so that integration norm drift remains
/// observable; the renormalization policy keeps it within 1e-9 of unit
/// length whenever renormalization is enabled.
struct AttitudeState {
  std::variant<PatchRotation, Quat> rep{PatchRotation{}};
  double t = 0.0;

  bool is_patch() const { return std::holds_alternative<PatchRotation>(rep); }
  const PatchRotation& patch() const {
    if (!is_patch())
      throw std::logic_error("AttitudeState: quaternion state has no patch representation");
    return std::get<PatchRotation>(rep);
  }
  const Quat& quaternion() const {
    if (is_patch())
      throw std::logic_error("AttitudeState: patch state has no quaternion representation");
    return std::get<Quat>(rep);
  }
  /// Either representation as a normalized quaternion, for error metrics.
  UnitQuaternion to_unit_quaternion() const {
    return is_patch() ? patch_to_quat(patch()) : UnitQuaternion(quaternion());
  }
};

struct StepResult {
  AttitudeState state;
  StepDiagnostics diag;
};

namespace detail {

/// Post-step controller: re-chart if any coordinate exceeded the threshold,
/// then record diagnostics. Shared by the patch Euler and RK4 steppers.
inline StepResult finish_patch_step(int patch_index, const Vec3& x, double next_t,
                                    double threshold) {
  StepDiagnostics diag;
  PatchRotation next{patch_index, x};
  if (needs_switch<3>(to_array(x), threshold)) {
    const PatchPoint<3> moved =
        switch_patch<3>(to_array(x), static_cast<std::size_t>(patch_index));
    next = {static_cast<int>(moved.patch_index), vec3_from_array(moved.x)};
    diag.switched = true;
  }
  diag.patch_index_after = next.patch_index;
  diag.max_abs_coordinate = max_abs(next.x);
  return {{next, next_t}, diag};
}

inline StepResult finish_quat_step(const Quat& q, double next_t) {
  StepDiagnostics diag;
  diag.patch_index_after = -1;
  diag.max_abs_coordinate = std::fmax(std::fabs(q.s), max_abs(q.v));
  diag.quat_norm_drift = std::fabs(norm(q) - 1.0);
  return {{q, next_t}, diag};
}

inline std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

}  // namespace detail

/// One exact difference step in the current patch, then the switch check.
inline StepResult step_patch_euler(const AttitudeState& state, const Vec3& omega,
                                   double dt, double threshold) {
  const PatchRotation& p = state.patch();
  const Vec3 x = p.x + patch_delta(p, omega, dt);
  return detail::finish_patch_step(p.patch_index, x, state.t + dt, threshold);
}

/// Classical 4-stage Runge-Kutta on the chart ODE. The patch index is held
/// fixed across all four stages (the ODE is smooth on the whole patch);
/// the switch check runs once, after the combined update.
template <typename RateFn>
StepResult step_patch_rk4(const AttitudeState& state, RateFn&& omega_of_t, double dt,
                          double threshold) {
  const PatchRotation& p = state.patch();
  const int i = p.patch_index;
  const double t = state.t;
  const auto f = [&](double tt, const Vec3& xx) {
    return patch_rhs(PatchRotation{i, xx}, omega_of_t(tt));
  };
  const Vec3 k1 = f(t, p.x);
  const Vec3 k2 = f(t + 0.5 * dt, p.x + (0.5 * dt) * k1);
  const Vec3 k3 = f(t + 0.5 * dt, p.x + (0.5 * dt) * k2);
  const Vec3 k4 = f(t + dt, p.x + dt * k3);
  const Vec3 x = p.x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return detail::finish_patch_step(i, x, t + dt, threshold);
}

/// Forward Euler on the quaternion ODE; optional renormalization afterwards.
inline StepResult step_quat_euler(const AttitudeState& state, const Vec3& omega,
                                  double dt, bool renormalize) {
  const Quat& q = state.quaternion();
  Quat next = q + quat_rhs(q, omega) * dt;
  if (renormalize) next = (1.0 / norm(next)) * next;
  return detail::finish_quat_step(next, state.t + dt);
}

/// Classical RK4 on the quaternion ODE; optional renormalization afterwards.
template <typename RateFn>
StepResult step_quat_rk4(const AttitudeState& state, RateFn&& omega_of_t, double dt,
                         bool renormalize) {
  const Quat& q = state.quaternion();
  const double t = state.t;
  const Quat k1 = quat_rhs(q, omega_of_t(t));
  const Quat k2 = quat_rhs(q + (0.5 * dt) * k1, omega_of_t(t + 0.5 * dt));
  const Quat k3 = quat_rhs(q + (0.5 * dt) * k2, omega_of_t(t + 0.5 * dt));
  const Quat k4 = quat_rhs(q + dt * k3, omega_of_t(t + dt));
  Quat next = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (renormalize) next = (1.0 / norm(next)) * next;
  return detail::finish_quat_step(next, state.t + dt);
}

/// Exact solution of the quaternion ODE for constant body rates: rotate q0
/// by the body-frame increment on the right.
inline UnitQuaternion closed_form_const(const UnitQuaternion& q0, const Vec3& omega,
                                        double t) {
  return UnitQuaternion(hamilton(q0.value(), quat_exp_body(omega, t).value()));
}

struct TrajectoryPoint {
  AttitudeState state;
  StepDiagnostics diag;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // points[0] is the initial state
  std::size_t switch_count = 0;

  const AttitudeState& final_state() const { return points.back().state; }
};

namespace detail {

template <typename RateFn>
StepResult dispatch_step(const AttitudeState& s, RateFn&& profile, double h,
                         const StepperConfig& config, std::size_t step_index) {
  const bool renorm = config.renormalize_every > 0 &&
                      (step_index + 1) % static_cast<std::size_t>(config.renormalize_every) == 0;
  switch (config.scheme) {
    case Scheme::PatchEuler:
      return step_patch_euler(s, profile(s.t), h, config.switch_threshold);
    case Scheme::PatchRk4:
      return step_patch_rk4(s, profile, h, config.switch_threshold);
    case Scheme::QuatEuler:
      return step_quat_euler(s, profile(s.t), h, renorm);
    case Scheme::QuatRk4:
      return step_quat_rk4(s, profile, h, renorm);
  }
  throw std::logic_error("dispatch_step: unreachable scheme");
}

/// Convert the initial state into the representation the scheme propagates.
inline AttitudeState to_scheme_representation(const AttitudeState& s, Scheme scheme) {
  if (is_patch_scheme(scheme)) {
    if (s.is_patch()) return s;
    return {quat_to_patch(UnitQuaternion(s.quaternion())), s.t};
  }
  if (!s.is_patch()) return s;
  return {patch_to_quat(s.patch()).value(), s.t};
}

}  // namespace detail

/// Fixed-step propagation of `initial` from t0 to t1 under the given rate
/// profile. The trajectory records the initial state plus one point per
/// step; a final partial step covers any remainder of the interval. Step
/// errors are rethrown with the failing time attached.
template <typename RateFn>
Trajectory propagate(const AttitudeState& initial, RateFn&& profile, double t0, double t1,
                     const StepperConfig& config) {
  config.validate();
  if (!(t1 >= t0)) throw std::invalid_argument("propagate: t1 must be >= t0");

  AttitudeState s = detail::to_scheme_representation(initial, config.scheme);
  s.t = t0;

  Trajectory traj;
  StepDiagnostics first;
  if (s.is_patch()) {
    // Controller precondition: every step starts within the threshold box,
    // including the very first.
    const PatchRotation& p = s.patch();
    if (needs_switch<3>(to_array(p.x), config.switch_threshold)) {
      const PatchPoint<3> moved =
          switch_patch<3>(to_array(p.x), static_cast<std::size_t>(p.patch_index));
      s.rep = PatchRotation{static_cast<int>(moved.patch_index), vec3_from_array(moved.x)};
      first.switched = true;
      ++traj.switch_count;
    }
    first.patch_index_after = s.patch().patch_index;
    first.max_abs_coordinate = max_abs(s.patch().x);
  } else {
    first = detail::finish_quat_step(s.quaternion(), t0).diag;
  }
  traj.points.push_back({s, first});

  const double span = t1 - t0;
  const auto n_full = static_cast<std::size_t>(std::floor(span / config.dt + 1e-9));
  const double rem = span - static_cast<double>(n_full) * config.dt;
  const bool has_partial = rem > config.dt * 1e-9;
  const std::size_t n_steps = n_full + (has_partial ? 1 : 0);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const bool partial = has_partial && k == n_full;
    const double h = partial ? rem : config.dt;
    StepResult r;
    try {
      r = detail::dispatch_step(s, profile, h, config, k);
    } catch (const StepError& e) {
      throw StepError(std::string(e.what()) + " (at t = " + detail::format_time(s.t) + " s)",
                      s.t);
    }
    s = r.state;
    s.t = partial ? t1 : t0 + static_cast<double>(k + 1) * config.dt;
    if (r.diag.switched) ++traj.switch_count;
    traj.points.push_back({s, r.diag});
  }
  return traj;
}

}  // namespace patchrot
