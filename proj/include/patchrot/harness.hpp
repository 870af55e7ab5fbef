#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "patchrot/integrate.hpp"
#include "patchrot/kinematics.hpp"
#include "patchrot/profile.hpp"
#include "patchrot/report.hpp"
#include "patchrot/rotation.hpp"

namespace patchrot {

/// Run orchestration shared by the command-line tool and the acceptance
/// suite: reference attitudes, report assembly, convergence studies and the
/// kernel micro-benchmark.

/// Substep refinement of the reference integrator relative to the run dt.
inline constexpr int kReferenceRefinement = 100;

/// Reference attitude at every trajectory point. Constant profiles use the
/// closed-form solution; anything else is re-integrated alongside the
/// trajectory with quaternion RK4 at dt/100 (renormalized each substep).
inline std::vector<UnitQuaternion> reference_attitudes(const Trajectory& traj,
                                                       const RateProfile& profile) {
  std::vector<UnitQuaternion> refs;
  refs.reserve(traj.points.size());
  const UnitQuaternion q0 = traj.points.front().state.to_unit_quaternion();
  const double t0 = traj.points.front().state.t;

  if (profile.is_constant()) {
    const Vec3 omega = profile.constant_rate();
    for (const TrajectoryPoint& pt : traj.points) {
      refs.push_back(closed_form_const(q0, omega, pt.state.t - t0));
    }
    return refs;
  }

  AttitudeState ref{q0.value(), t0};
  refs.push_back(q0);
  for (std::size_t k = 1; k < traj.points.size(); ++k) {
    const double ta = traj.points[k - 1].state.t;
    const double tb = traj.points[k].state.t;
    const double h = (tb - ta) / kReferenceRefinement;
    for (int j = 0; j < kReferenceRefinement; ++j) {
      ref = step_quat_rk4(ref, profile, h, /*renormalize=*/true).state;
    }
    ref.t = tb;
    refs.push_back(UnitQuaternion(ref.quaternion()));
  }
  return refs;
}

struct IntegrateRunConfig {
  StepperConfig stepper;
  RateProfile profile = RateProfile::constant({0.0, 0.0, 0.0});
  double t0 = 0.0;
  double t1 = 1.0;
  AttitudeState initial{};  // identity attitude in patch 0 by default
};

struct IntegrateOutcome {
  Trajectory trajectory;
  RunReport report;
  double wall_ns_per_rhs = 0.0;  // mean propagation wall time per RHS evaluation
};

/// Propagate and assemble the per-step report rows against the reference.
inline IntegrateOutcome run_integrate(const IntegrateRunConfig& cfg) {
  namespace chrono = std::chrono;
  const auto tic = chrono::steady_clock::now();
  Trajectory traj = propagate(cfg.initial, cfg.profile, cfg.t0, cfg.t1, cfg.stepper);
  const auto toc = chrono::steady_clock::now();

  const std::vector<UnitQuaternion> refs = reference_attitudes(traj, cfg.profile);

  RunReport report;
  report.rows.reserve(traj.points.size());
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const TrajectoryPoint& pt = traj.points[k];
    ReportRow row;
    row.t = pt.state.t;
    row.switched = pt.diag.switched;
    row.geo_err = geodesic_distance(pt.state.to_unit_quaternion(), refs[k]);
    if (pt.state.is_patch()) {
      const PatchRotation& p = pt.state.patch();
      row.rep = RepKind::Patch;
      row.patch_index = p.patch_index;
      row.c = {p.x.x, p.x.y, p.x.z, 0.0};
      row.has_c3 = false;
      row.ortho_defect = orthogonality_defect(patch_to_matrix(p));
    } else {
      const Quat& q = pt.state.quaternion();
      row.rep = RepKind::Quat;
      row.patch_index = -1;
      row.c = to_array(q);
      row.has_c3 = true;
      // The unit-formula matrix of the *stored* quaternion: norm drift shows
      // up here as a nonzero defect, which is the point of the column.
      row.ortho_defect = orthogonality_defect(detail::rotation_matrix_unit_formula(q));
      row.norm_drift = pt.diag.quat_norm_drift;
    }
    report.rows.push_back(row);
  }
  report.summary.final_geo_err = report.rows.back().geo_err;
  report.summary.total_switches = traj.switch_count;

  const std::size_t steps = traj.points.size() - 1;
  const std::size_t rhs_per_step =
      (cfg.stepper.scheme == Scheme::PatchRk4 || cfg.stepper.scheme == Scheme::QuatRk4) ? 4 : 1;
  const double total_ns =
      static_cast<double>(chrono::duration_cast<chrono::nanoseconds>(toc - tic).count());
  IntegrateOutcome out{std::move(traj), std::move(report), 0.0};
  if (steps > 0) out.wall_ns_per_rhs = total_ns / static_cast<double>(steps * rhs_per_step);
  return out;
}

/// Least-squares slope of log(err) vs log(dt).
inline double fit_loglog_slope(const std::vector<std::pair<double, double>>& dt_err) {
  if (dt_err.size() < 2) throw std::invalid_argument("slope fit needs at least 2 points");
  double su = 0.0, sv = 0.0;
  for (const auto& [dt, err] : dt_err) {
    if (!(dt > 0.0) || !(err > 0.0))
      throw std::invalid_argument("slope fit needs positive dt and error");
    su += std::log(dt);
    sv += std::log(err);
  }
  const double n = static_cast<double>(dt_err.size());
  const double mu = su / n, mv = sv / n;
  double num = 0.0, den = 0.0;
  for (const auto& [dt, err] : dt_err) {
    const double du = std::log(dt) - mu;
    num += du * (std::log(err) - mv);
    den += du * du;
  }
  return num / den;
}

struct ConvergenceRow {
  Scheme scheme = Scheme::PatchEuler;
  double dt = 0.0;
  double final_err = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<Scheme, double>> slopes;  // fitted log-log slope per scheme
};

/// Final-time geodesic error per (scheme, dt) rung plus fitted order.
/// Constant profiles are measured against the closed form; other profiles
/// against a quaternion RK4 reference at (smallest dt)/100.
inline ConvergenceStudy run_convergence(const std::vector<Scheme>& schemes,
                                        const std::vector<double>& dts,
                                        const RateProfile& profile, double t0, double t1,
                                        double switch_threshold = 2.0,
                                        int renormalize_every = 1) {
  if (dts.size() < 3)
    throw std::invalid_argument("convergence study needs at least 3 dt rungs");
  for (double dt : dts) {
    if (!(dt > 0.0)) throw std::invalid_argument("convergence study: dt must be > 0");
  }

  UnitQuaternion ref_final;
  if (profile.is_constant()) {
    ref_final = closed_form_const(UnitQuaternion{}, profile.constant_rate(), t1 - t0);
  } else {
    double dt_min = dts.front();
    for (double dt : dts) dt_min = std::fmin(dt_min, dt);
    StepperConfig ref_cfg{Scheme::QuatRk4, dt_min / kReferenceRefinement, switch_threshold, 1};
    ref_final = propagate(AttitudeState{Quat{}, t0}, profile, t0, t1, ref_cfg)
                    .final_state()
                    .to_unit_quaternion();
  }

  ConvergenceStudy study;
  for (Scheme scheme : schemes) {
    std::vector<std::pair<double, double>> dt_err;
    for (double dt : dts) {
      StepperConfig cfg{scheme, dt, switch_threshold, renormalize_every};
      const Trajectory traj = propagate(AttitudeState{}, profile, t0, t1, cfg);
      const double err =
          geodesic_distance(traj.final_state().to_unit_quaternion(), ref_final);
      study.rows.push_back({scheme, dt, err});
      dt_err.emplace_back(dt, err);
    }
    study.slopes.emplace_back(scheme, fit_loglog_slope(dt_err));
  }
  return study;
}

inline void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out) {
  out << "scheme,dt,final_geo_err\n";
  for (const ConvergenceRow& r : study.rows) {
    out << scheme_name(r.scheme) << ',' << format_g17(r.dt) << ','
        << format_g17(r.final_err) << '\n';
  }
  for (const auto& [scheme, slope] : study.slopes) {
    out << "# slope," << scheme_name(scheme) << ',' << format_g17(slope) << '\n';
  }
}

struct BenchResult {
  std::size_t calls = 0;
  double patch_ns_per_call = 0.0;
  double quat_ns_per_call = 0.0;
  double ratio = 0.0;        // patch / quat
  double patch_checksum = 0.0;  // consumed kernel outputs (also deterministic per seed)
  double quat_checksum = 0.0;
};

namespace detail {

inline double bench_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Pins `acc` and all memory at this point in program order. Without it the
/// optimizer may schedule a timed loop outside its two clock reads — legal,
/// because the loop's buffers provably don't alias the clock — leaving the
/// clocks timing an empty window. Called right after the opening clock read
/// and right before the closing one.
inline void timing_fence(double& acc) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : "+m"(acc) : : "memory");
#else
  volatile double spill = acc;
  acc = spill;
#endif
}

}  // namespace detail

/// Mean wall time per call of the two 12-multiplication kernels over
/// pre-generated random inputs. Outputs are accumulated into checksums so
/// the calls cannot be optimized away; inputs cycle through a buffer large
/// enough to defeat trivial caching of results, small enough to stay in L1.
/// Kept out of line so every executable measures one and the same machine
/// code for the timed loops instead of a caller-dependent inlining of them.
#if defined(__GNUC__) || defined(__clang__)
__attribute__((noinline))
#endif
inline BenchResult run_bench(std::size_t calls, std::uint64_t seed) {
  namespace chrono = std::chrono;
  constexpr std::size_t kBuf = 4096;  // power of two, index masking is free

  std::mt19937_64 rng(seed);
  std::vector<PatchRotation> patches(kBuf);
  std::vector<Quat> quats(kBuf);
  std::vector<Vec3> rates(kBuf);
  for (std::size_t j = 0; j < kBuf; ++j) {
    patches[j].patch_index = static_cast<int>(rng() & 3);
    patches[j].x = {detail::bench_uniform(rng, -1, 1), detail::bench_uniform(rng, -1, 1),
                    detail::bench_uniform(rng, -1, 1)};
    Quat q{detail::bench_uniform(rng, -1, 1),
           {detail::bench_uniform(rng, -1, 1), detail::bench_uniform(rng, -1, 1),
            detail::bench_uniform(rng, -1, 1)}};
    if (norm(q) < 1e-3) q = Quat{1.0, {0.0, 0.0, 0.0}};
    quats[j] = (1.0 / norm(q)) * q;
    rates[j] = {detail::bench_uniform(rng, -5, 5), detail::bench_uniform(rng, -5, 5),
                detail::bench_uniform(rng, -5, 5)};
  }

  BenchResult result;
  result.calls = calls;

  // Warm-up passes touch every input and prime caches and branch history.
  double sink = 0.0;
  for (std::size_t j = 0; j < kBuf; ++j) {
    sink += patch_rhs(patches[j], rates[j]).x + quat_rhs(quats[j], rates[j]).s;
  }

  {
    double acc = sink * 0.0;
    const auto tic = chrono::steady_clock::now();
    detail::timing_fence(acc);
    for (std::size_t j = 0; j < calls; ++j) {
      const std::size_t idx = j & (kBuf - 1);
      const Vec3 dx = patch_rhs(patches[idx], rates[idx]);
      acc += dx.x + dx.y + dx.z;
    }
    detail::timing_fence(acc);
    const auto toc = chrono::steady_clock::now();
    result.patch_checksum = acc;
    result.patch_ns_per_call =
        static_cast<double>(chrono::duration_cast<chrono::nanoseconds>(toc - tic).count()) /
        static_cast<double>(calls);
  }
  {
    double acc = 0.0;
    const auto tic = chrono::steady_clock::now();
    detail::timing_fence(acc);
    for (std::size_t j = 0; j < calls; ++j) {
      const std::size_t idx = j & (kBuf - 1);
      const Quat dq = quat_rhs(quats[idx], rates[idx]);
      acc += dq.s + dq.v.x + dq.v.y + dq.v.z;
    }
    detail::timing_fence(acc);
    const auto toc = chrono::steady_clock::now();
    result.quat_checksum = acc;
    result.quat_ns_per_call =
        static_cast<double>(chrono::duration_cast<chrono::nanoseconds>(toc - tic).count()) /
        static_cast<double>(calls);
  }
  result.ratio = result.patch_ns_per_call / result.quat_ns_per_call;
  return result;
}

inline void write_bench_csv(const std::vector<BenchResult>& runs, std::ostream& out) {
  out << "run,kernel,calls,ns_per_call,checksum\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out << r << ",patch_rhs," << runs[r].calls << ',' << format_g17(runs[r].patch_ns_per_call)
        << ',' << format_g17(runs[r].patch_checksum) << '\n';
    out << r << ",quat_rhs," << runs[r].calls << ',' << format_g17(runs[r].quat_ns_per_call)
        << ',' << format_g17(runs[r].quat_checksum) << '\n';
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out << "# ratio,run" << r << ',' << format_g17(runs[r].ratio) << '\n';
  }
}

}  // namespace patchrot
