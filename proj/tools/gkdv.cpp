// Batch front-end for the gKdV slowly-varying-medium laboratory.
//
// Subcommands: laws, ode, pde, compare, scan, checks.
// Exit codes: 0 pass, 1 suite/tolerance failure, 2 invalid config, 3 numerical abort.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gkdv/adiabatic.hpp"
#include "gkdv/checks.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/io.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/scaling_laws.hpp"

namespace fs = std::filesystem;
using namespace gkdv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitNumericalAbort = 3;

void ensure_out(const std::string& dir) { fs::create_directories(dir); }

int cmd_laws(int m_arg, const std::string& out_dir, int grid_points) {
  ensure_out(out_dir);
  std::vector<int> ms = m_arg == 0 ? std::vector<int>{2, 3, 4} : std::vector<int>{m_arg};
  for (int m : ms) {
    const double lt = lambda_tilde(m);
    std::printf("m=%d  lambda0=%.12g  p=%.12g  theta=%.12g  lambda_tilde=%.12g\n", m,
                lambda0(m), p_exponent(m), theta(m), lt);
    char name[64];
    std::snprintf(name, sizeof(name), "laws_m%d.csv", m);
    std::ofstream csv(fs::path(out_dir) / name);
    csv << "lambda,c_inf,regime,final_velocity,final_mass_ratio,kappa,residual\n";
    char line[320];
    for (int i = 0; i < grid_points; ++i) {
      const double lam = (i + 0.5) / grid_points * 0.999;
      const ScalingPrediction pred = c_infinity(m, lam);
      std::snprintf(line, sizeof(line), "%.12g,%.12g,%s,%.12g,%.12g,%.12g,%.3g\n", lam,
                    pred.c_inf, regime_name(pred.regime), pred.final_velocity,
                    pred.final_mass_ratio, pred.kappa, pred.residual);
      csv << line;
      if (std::fabs(pred.residual) > 1e-10) {
        std::fprintf(stderr, "laws: residual breach at m=%d lambda=%g: %g\n", m, lam,
                     pred.residual);
        return kExitSuiteFailure;
      }
    }
    std::printf("  wrote %s\n", (fs::path(out_dir) / name).string().c_str());
  }
  return kExitOk;
}

int cmd_ode(const ExperimentConfig& cfg, const std::string& out_dir, double drift_tol) {
  ensure_out(out_dir);
  const ModelParams params = cfg.model_params();
  const OdeRun run = integrate_adiabatic(params, cfg.ode_config());
  write_ode_csv(run, (fs::path(out_dir) / "ode_trajectory.csv").string());
  write_ode_run_json(run, (fs::path(out_dir) / "ode_run.json").string());

  double drift = 0.0;
  double i0 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : run.samples) {
    if (!std::isfinite(s.first_integral)) continue;
    if (!std::isfinite(i0)) i0 = s.first_integral;
    drift = std::max(drift, std::fabs(s.first_integral - i0));
  }
  std::printf("ode: t_start=%.6g dt=%.6g samples=%zu drift=%.3g\n", run.t_start,
              run.config.dt, run.samples.size(), drift);
  if (run.t0) std::printf("ode: t0=%.8g (C crossed lambda)\n", *run.t0);
  if (run.escape_time)
    std::printf("ode: escape_time=%.8g c_escape=%.10g\n", *run.escape_time,
                run.c_escape);
  else
    std::printf("ode: warning: horizon exhausted before escape\n");
  if (std::isfinite(drift) && drift > drift_tol) {
    std::fprintf(stderr, "ode: first-integral drift %g exceeds %g\n", drift, drift_tol);
    return kExitSuiteFailure;
  }
  return kExitOk;
}

void write_pde_outputs(const ExperimentResult& res, const ExperimentConfig& cfg,
                       const std::string& out_dir) {
  ensure_out(out_dir);
  std::vector<std::string> files;
  const size_t stride = std::max<size_t>(1, res.snapshots.size() / 40);
  for (size_t i = 0; i < res.snapshots.size(); ++i) {
    if (i % stride != 0 && i + 1 != res.snapshots.size()) continue;
    char name[64];
    std::snprintf(name, sizeof(name), "field_%05zu.csv", i);
    write_field_csv(res.snapshots[i], res.params, (fs::path(out_dir) / name).string());
    files.push_back(name);
  }
  write_trace_csv(res.trace, (fs::path(out_dir) / "invariants.csv").string());
  write_track_csv(res.mod_track, (fs::path(out_dir) / "track.csv").string());
  write_manifest_json(res, cfg, files, (fs::path(out_dir) / "manifest.json").string());
}

int cmd_pde(const ExperimentConfig& cfg, const std::string& out_dir) {
  const ExperimentResult res =
      run_experiment(cfg.model_params(), cfg.solver_config(), cfg.run_controls());
  write_pde_outputs(res, cfg, out_dir);
  std::printf("pde: dt=%.6g end_time=%.6g snapshots=%zu exited=%d side=%d\n", res.dt,
              res.end_time, res.snapshots.size(), res.exited ? 1 : 0, res.exit_side);
  if (res.boundary_abort) {
    std::fprintf(stderr, "pde: boundary contamination: domain too small\n");
    return kExitNumericalAbort;
  }
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_out(out_dir);
  const ModelParams params = cfg.model_params();
  const ExperimentResult res =
      run_experiment(params, cfg.solver_config(), cfg.run_controls());
  if (res.boundary_abort) {
    std::fprintf(stderr, "compare: boundary contamination: domain too small\n");
    return kExitNumericalAbort;
  }
  const OdeRun ode = integrate_adiabatic(params, cfg.ode_config());
  const OdeComparison cmp = compare_to_ode(res.mod_track, ode);
  const double final_mass = res.trace.rows.back().mass;
  const RegimeReport report = make_regime_report(res.mod_track, params, final_mass);

  write_track_csv(res.mod_track, (fs::path(out_dir) / "track.csv").string());
  write_trace_csv(res.trace, (fs::path(out_dir) / "invariants.csv").string());
  write_ode_csv(ode, (fs::path(out_dir) / "ode_trajectory.csv").string());
  write_regime_report_json(report, (fs::path(out_dir) / "regime_report.json").string());

  nlohmann::json j;
  j["sup_c_error"] = cmp.sup_c_error;
  j["sup_velocity_error"] = cmp.sup_velocity_error;
  j["tolerance"] = cmp.tolerance;
  j["pass"] = cmp.pass;
  j["compared_samples"] = cmp.compared_samples;
  j["t_align_pde"] = cmp.t_align_pde;
  j["t_align_ode"] = cmp.t_align_ode;
  std::ofstream((fs::path(out_dir) / "ode_comparison.json").string())
      << j.dump(2) << "\n";

  std::printf("compare: measured=%s predicted=%s c_plus=%.6g c_inf=%.6g v=%.6g\n",
              regime_name(report.regime_measured), regime_name(report.regime_predicted),
              report.c_plus, report.predicted.c_inf, report.final_velocity);
  std::printf("compare: sup|c_fit-C|=%.4g sup|v-v_ode|=%.4g tol=%.4g -> %s\n",
              cmp.sup_c_error, cmp.sup_velocity_error, cmp.tolerance,
              cmp.pass ? "pass" : "FAIL");
  return cmp.pass && report.regime_measured == report.regime_predicted
             ? kExitOk
             : kExitSuiteFailure;
}

int cmd_scan(const ExperimentConfig& base, const std::string& out_dir, double lam_min,
             double lam_max, int points, int jobs) {
  ensure_out(out_dir);
  struct Row {
    double lambda = 0.0;
    std::string regime_predicted, regime_measured;
    double c_inf = 0.0, c_plus = 0.0, final_velocity = 0.0;
    bool ok = false;
  };
  std::vector<double> lambdas(points);
  for (int i = 0; i < points; ++i)
    lambdas[i] =
        points == 1 ? lam_min : lam_min + (lam_max - lam_min) * i / (points - 1);

  auto run_one = [&](double lam) -> Row {
    ExperimentConfig cfg = base;
    cfg.lambda = lam;
    Row row;
    row.lambda = lam;
    try {
      const ModelParams params = cfg.model_params();
      const ScalingPrediction pred = c_infinity(params.m, lam);
      const ExperimentResult res =
          run_experiment(params, cfg.solver_config(), cfg.run_controls());
      const RegimeReport rep =
          make_regime_report(res.mod_track, params, res.trace.rows.back().mass);
      row.regime_predicted = regime_name(pred.regime);
      row.regime_measured = regime_name(rep.regime_measured);
      row.c_inf = pred.c_inf;
      row.c_plus = rep.c_plus;
      row.final_velocity = rep.final_velocity;
      row.ok = !res.boundary_abort;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "scan: lambda=%g failed: %s\n", lam, e.what());
    }
    return row;
  };

  std::vector<Row> rows(points);
  if (jobs <= 1) {
    for (int i = 0; i < points; ++i) rows[i] = run_one(lambdas[i]);
  } else {
    std::vector<std::future<Row>> futs(points);
    int next = 0, inflight = 0, done = 0;
    while (done < points) {
      while (next < points && inflight < jobs) {
        futs[next] = std::async(std::launch::async, run_one, lambdas[next]);
        ++next;
        ++inflight;
      }
      rows[done] = futs[done].get();
      ++done;
      --inflight;
    }
  }

  std::ofstream csv(fs::path(out_dir) / "scan.csv");
  csv << "lambda,regime_predicted,regime_measured,c_inf,c_plus,final_velocity\n";
  bool all_ok = true;
  char line[320];
  for (const Row& r : rows) {
    std::snprintf(line, sizeof(line), "%.12g,%s,%s,%.12g,%.12g,%.12g\n", r.lambda,
                  r.regime_predicted.c_str(), r.regime_measured.c_str(), r.c_inf,
                  r.c_plus, r.final_velocity);
    csv << line;
    std::fputs(line, stdout);
    all_ok = all_ok && r.ok;
  }
  return all_ok ? kExitOk : kExitNumericalAbort;
}

int cmd_checks(const std::string& out_dir) {
  ensure_out(out_dir);
  std::vector<CheckResult> all = profiles_check_suite();
  const auto lin = linops_check_suite();
  all.insert(all.end(), lin.begin(), lin.end());

  nlohmann::json j = nlohmann::json::object();
  j["grids"] = {{"operator", "L=40.96 N=8192 dx=0.01"},
                {"correction_profile", "L=40.96 N=16384 dx=0.005"}};
  nlohmann::json items = nlohmann::json::object();
  bool ok = true;
  for (const auto& r : all) {
    items[r.name] = {{"value", r.value}, {"threshold", r.threshold}, {"pass", r.pass}};
    std::printf("%-64s %10.3g  %s\n", r.name.c_str(), r.value, r.pass ? "ok" : "FAIL");
    if (!r.pass) {
      std::fprintf(stderr, "checks: failing identity: %s (value %g, threshold %g)\n",
                   r.name.c_str(), r.value, r.threshold);
      ok = false;
    }
  }
  j["residuals"] = items;
  std::ofstream((fs::path(out_dir) / "checks.json").string()) << j.dump(2) << "\n";
  return ok ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gKdV soliton dynamics in a slowly varying medium"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  int m = 3;
  double lambda = 0.45, eps = 0.05, gamma = 1.0;
  double half_length = 0.0, dt = 0.0, x0 = 0.0, horizon = 0.0, tol = 1e-9;
  int n = 0;

  app.add_option("--config", config_path, "config file (key = value sections)");
  app.add_option("--out", out_dir, "output directory");

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--m", m, "nonlinearity exponent (2, 3 or 4)");
    sub->add_option("--lambda", lambda, "shift parameter in [0,1)");
    sub->add_option("--eps", eps, "slowness parameter");
    sub->add_option("--gamma", gamma, "potential steepness");
    sub->add_option("--L", half_length, "half-length of the periodic box");
    sub->add_option("--N", n, "grid points (power of two)");
    sub->add_option("--dt", dt, "time step (0 = auto)");
    sub->add_option("--x0", x0, "launch center (0 = auto)");
    sub->add_option("--horizon", horizon, "time horizon (0 = auto)");
    sub->add_option("--tol", tol, "pass/fail tolerance where applicable");
  };

  CLI::App* laws = app.add_subcommand("laws", "scaling-law constants and c_inf table");
  int laws_points = 200;
  int laws_m = 0;
  laws->add_option("--m", laws_m, "nonlinearity (0 = all)");
  laws->add_option("--points", laws_points, "lambda grid points");

  CLI::App* ode = app.add_subcommand("ode", "reduced (C,P) trajectory");
  add_model_flags(ode);

  CLI::App* pde = app.add_subcommand("pde", "direct PDE experiment");
  add_model_flags(pde);

  CLI::App* compare = app.add_subcommand("compare", "PDE vs ODE vs algebraic laws");
  add_model_flags(compare);

  CLI::App* scan = app.add_subcommand("scan", "lambda scan of compare runs");
  add_model_flags(scan);
  double lam_min = 0.36, lam_max = 0.60;
  int scan_points = 7, jobs = static_cast<int>(std::thread::hardware_concurrency());
  scan->add_option("--lambda-min", lam_min, "scan start");
  scan->add_option("--lambda-max", lam_max, "scan end");
  scan->add_option("--points", scan_points, "scan points");
  scan->add_option("--jobs", jobs, "parallel workers");

  CLI::App* checks = app.add_subcommand("checks", "profile/operator identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
    auto fill = [&](CLI::App* sub) {
      if (sub->count("--m")) cfg.m = m;
      if (sub->count("--lambda")) cfg.lambda = lambda;
      if (sub->count("--eps")) cfg.eps = eps;
      if (sub->count("--gamma")) cfg.gamma = gamma;
      if (sub->count("--L")) cfg.half_length = half_length;
      if (sub->count("--N")) cfg.n = n;
      if (sub->count("--dt")) cfg.dt = dt;
      if (sub->count("--x0")) cfg.x0 = x0;
      if (sub->count("--horizon")) cfg.horizon = horizon;
    };

    if (laws->parsed()) return cmd_laws(laws_m, out_dir, laws_points);
    if (ode->parsed()) {
      fill(ode);
      if (ode->count("--dt")) cfg.ode_dt = dt;
      return cmd_ode(cfg, out_dir, tol);
    }
    if (pde->parsed()) {
      fill(pde);
      return cmd_pde(cfg, out_dir);
    }
    if (compare->parsed()) {
      fill(compare);
      return cmd_compare(cfg, out_dir);
    }
    if (scan->parsed()) {
      fill(scan);
      return cmd_scan(cfg, out_dir, lam_min, lam_max, scan_points, std::max(1, jobs));
    }
    if (checks->parsed()) return cmd_checks(out_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return kExitNumericalAbort;
  }
  return kExitOk;
}
