// Command-line front end: attitude integration runs with CSV reports,
// convergence-order studies, and the RHS kernel micro-benchmark.
//
// Exit codes: 0 success, 2 usage error (bad flags/arguments), 3 runtime
// error (failed step, unreadable input file).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchrot/patchrot.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::vector<double> parse_dt_ladder(const std::string& text) {
  std::vector<double> dts;
  for (const std::string& tok : patchrot::detail::split(text, ',')) {
    dts.push_back(patchrot::detail::parse_double(tok, "--dts"));
  }
  return dts;
}

// Stream selector: --out PATH or standard output.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonFlags {
  std::string profile_text;
  std::string out_path;
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 1e-3;
  double switch_threshold = 2.0;
  int renormalize_every = 1;
};

void add_run_flags(CLI::App* cmd, CommonFlags& f, bool want_dt) {
  cmd->add_option("--profile", f.profile_text,
                  "rate profile: constant:x,y,z | sinusoid:ax,ay,az:f:phase | "
                  "tumble:seed:bw:rms | csv:PATH")
      ->required();
  cmd->add_option("--t0", f.t0, "start time [s]")->capture_default_str();
  cmd->add_option("--t1", f.t1, "end time [s]")->required();
  if (want_dt) cmd->add_option("--dt", f.dt, "step size [s]")->capture_default_str();
  cmd->add_option("--switch-threshold", f.switch_threshold,
                  "re-chart when any |coordinate| exceeds this (>= 1)")
      ->capture_default_str();
  cmd->add_option("--renormalize-every", f.renormalize_every,
                  "renormalize quaternion states every N steps (0 = never)")
      ->capture_default_str();
  cmd->add_option("--out", f.out_path, "write CSV here instead of standard output");
}

int run_integrate_cmd(const std::string& scheme_text, const CommonFlags& f) {
  patchrot::IntegrateRunConfig cfg;
  cfg.stepper.scheme = patchrot::parse_scheme(scheme_text);
  cfg.stepper.dt = f.dt;
  cfg.stepper.switch_threshold = f.switch_threshold;
  cfg.stepper.renormalize_every = f.renormalize_every;
  cfg.profile = patchrot::RateProfile::parse(f.profile_text);
  cfg.t0 = f.t0;
  cfg.t1 = f.t1;

  const patchrot::IntegrateOutcome outcome = patchrot::run_integrate(cfg);
  OutputTarget out(f.out_path);
  patchrot::write_report_csv(outcome.report, out.stream());
  // Timing is machine-dependent; it goes to stderr so the report itself is
  // byte-identical across runs with the same flags.
  std::cerr << "wall_ns_per_rhs," << patchrot::format_g17(outcome.wall_ns_per_rhs) << '\n';
  return 0;
}

int run_convergence_cmd(const std::vector<std::string>& scheme_texts,
                        const std::string& dts_text, const CommonFlags& f) {
  std::vector<patchrot::Scheme> schemes;
  if (scheme_texts.empty()) {
    schemes = {patchrot::Scheme::PatchEuler, patchrot::Scheme::PatchRk4,
               patchrot::Scheme::QuatEuler, patchrot::Scheme::QuatRk4};
  } else {
    for (const std::string& s : scheme_texts) schemes.push_back(patchrot::parse_scheme(s));
  }
  const std::vector<double> dts = parse_dt_ladder(dts_text);
  const patchrot::RateProfile profile = patchrot::RateProfile::parse(f.profile_text);
  const patchrot::ConvergenceStudy study = patchrot::run_convergence(
      schemes, dts, profile, f.t0, f.t1, f.switch_threshold, f.renormalize_every);
  OutputTarget out(f.out_path);
  patchrot::write_convergence_csv(study, out.stream());
  return 0;
}

int run_bench_cmd(std::size_t calls, int repeats, std::uint64_t seed,
                  const std::string& out_path) {
  if (calls == 0) throw std::invalid_argument("--calls must be positive");
  if (repeats < 1) throw std::invalid_argument("--repeats must be >= 1");
  std::vector<patchrot::BenchResult> runs;
  runs.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    runs.push_back(patchrot::run_bench(calls, seed));
  }
  OutputTarget out(out_path);
  patchrot::write_bench_csv(runs, out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attitude propagation in affine-patch coordinates of RP^3"};
  app.require_subcommand(1);

  CommonFlags integrate_flags;
  std::string integrate_scheme = "patch-euler";
  CLI::App* integrate = app.add_subcommand(
      "integrate", "propagate a rate profile and emit a per-step CSV report");
  integrate->add_option("--scheme", integrate_scheme,
                        "patch-euler | patch-rk4 | quat-euler | quat-rk4")
      ->capture_default_str();
  add_run_flags(integrate, integrate_flags, /*want_dt=*/true);

  CommonFlags convergence_flags;
  std::vector<std::string> convergence_schemes;
  std::string dts_text;
  CLI::App* convergence = app.add_subcommand(
      "convergence", "measure final error across a dt ladder and fit the order");
  convergence->add_option("--scheme", convergence_schemes,
                          "scheme to study (repeatable; default: all four)");
  convergence->add_option("--dts", dts_text, "comma-separated dt ladder, at least 3 rungs")
      ->required();
  add_run_flags(convergence, convergence_flags, /*want_dt=*/false);

  std::size_t bench_calls = 10'000'000;
  int bench_repeats = 3;
  std::uint64_t bench_seed = 42;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand(
      "bench", "time the patch and quaternion RHS kernels on random inputs");
  bench->add_option("--calls", bench_calls, "kernel evaluations per run")
      ->capture_default_str();
  bench->add_option("--repeats", bench_repeats, "independent timed runs")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "input-generation seed")->capture_default_str();
  bench->add_option("--out", bench_out, "write CSV here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (integrate->parsed()) return run_integrate_cmd(integrate_scheme, integrate_flags);
    if (convergence->parsed())
      return run_convergence_cmd(convergence_schemes, dts_text, convergence_flags);
    if (bench->parsed()) return run_bench_cmd(bench_calls, bench_repeats, bench_seed, bench_out);
  } catch (const patchrot::StepError& e) {
    std::cerr << "step error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
