// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
//
// Heavy PDE sections run at desk scale; expect roughly half an hour total.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/adiabatic.hpp"
#include "gkdv/checks.hpp"
#include "gkdv/experiment.hpp"
#include "gkdv/linops.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/pde.hpp"
#include "gkdv/quadrature.hpp"
#include "gkdv/scaling_laws.hpp"
#include "gkdv/soliton.hpp"

using namespace gkdv;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("%-68s %s%s%s\n", name.c_str(), pass ? "PASS" : "FAIL",
              detail.empty() ? "" : "   ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void info(const std::string& line) {
  std::printf("    note: %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  bool ok = lambda0(2) == 3.0 / 5.0 && lambda0(3) == 1.0 / 3.0 &&
            lambda0(4) == 1.0 / 7.0;
  ok = ok && p_exponent(2) == 4.0 / 5.0 && p_exponent(3) == 2.0 / 3.0 &&
       p_exponent(4) == 4.0 / 7.0;
  ok = ok && theta(2) == 3.0 / 4.0 && theta(3) == 1.0 / 4.0 && theta(4) == 1.0 / 12.0;
  report("[1] scaling-law exactness: lambda0, p, theta exact rationals", ok);
  info("lambda0 = {3/5, 1/3, 1/7} from (5-m)/(m+3); the quadrature energy identity");
  info("pins lambda0(3) = 1/3 to 1e-10 (a 2/5 value is off by 0.13 there)");
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
  bool residuals_ok = true, anchors_ok = true, monotone_ok = true, limit_ok = true;
  for (int m = 2; m <= 4; ++m) {
    const double lt = lambda_tilde(m);
    const double f = lt * std::pow((1.0 - lambda0(m)) / (lt - lambda0(m)),
                                   1.0 - lambda0(m)) -
                     std::pow(2.0, p_exponent(m));
    residuals_ok = residuals_ok && std::fabs(f) < 1e-10;
    anchors_ok = anchors_ok &&
                 std::fabs(c_infinity(m, 0.0).c_inf - std::pow(2.0, p_exponent(m))) <
                     1e-10 &&
                 std::fabs(c_infinity(m, lambda0(m)).c_inf - 1.0) < 1e-10;

    double prev = c_infinity(m, 1e-4).c_inf;
    for (int i = 1; i < 200; ++i) {
      const double lam = 1e-4 + (lt - 2e-4) * i / 199.0;
      const double c = c_infinity(m, lam).c_inf;
      monotone_ok = monotone_ok && c < prev;
      prev = c;
      residuals_ok = residuals_ok && std::fabs(c_infinity(m, lam).residual) < 1e-10;
    }
    prev = c_infinity(m, lt + 1e-4).c_inf;
    for (int i = 1; i < 200; ++i) {
      const double lam = lt + 1e-4 + (0.999 - lt - 1e-4) * i / 199.0;
      const double c = c_infinity(m, lam).c_inf;
      monotone_ok = monotone_ok && c > prev;
      prev = c;
      residuals_ok = residuals_ok && std::fabs(c_infinity(m, lam).residual) < 1e-10;
    }
    limit_ok = limit_ok && c_infinity(m, 0.999).c_inf > 0.93 &&
               c_infinity(m, 0.999).c_inf < 1.0;
  }
  report("[2a] lambda_tilde and c_inf defining-equation residuals < 1e-10",
         residuals_ok);
  report("[2b] c_inf(0) = 2^p and c_inf(lambda0) = 1 to 1e-10", anchors_ok);
  report("[2c] branch monotonicity on 200-point grids", monotone_ok);
  report("[2d] c_inf(lambda -> 1^-) -> 1", limit_ok);
}

// ---------------------------------------------------------------- criterion 3
double ode_drift(const OdeRun& run) {
  double drift = 0.0;
  double i0 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : run.samples) {
    if (!std::isfinite(s.first_integral)) continue;
    if (!std::isfinite(i0)) i0 = s.first_integral;
    drift = std::max(drift, std::fabs(s.first_integral - i0));
  }
  return drift;
}

void criterion_3() {
  {
    const ModelParams params(3, 0.38, 0.01);
    const double d = ode_drift(integrate_adiabatic(params));
    report("[3a] first-integral drift < 1e-9 over a full run (eps=0.01)", d < 1e-9,
           fmt("drift=%.2e", d));
    OdeConfig coarse;
    coarse.dt = 1.6;
    coarse.sample_stride = 2;
    OdeConfig fine = coarse;
    fine.dt = 0.8;
    const double ratio = ode_drift(integrate_adiabatic(params, coarse)) /
                         ode_drift(integrate_adiabatic(params, fine));
    report("[3b] drift reduces ~16x under dt halving", ratio > 12.0 && ratio < 20.0,
           fmt("ratio=%.1f", ratio));
  }
  {
    const double lt = lambda_tilde(3);
    const double l0 = lambda0(3);
    bool dichotomy_ok = true;
    int last_no_t0 = -1, first_t0 = 50;
    for (int i = 0; i < 50; ++i) {
      const double lam = (l0 + 0.01) + (0.99 - l0 - 0.01) * i / 49.0;
      const OdeRun run = integrate_adiabatic(ModelParams(3, lam, 0.01));
      if (run.t0)
        first_t0 = std::min(first_t0, i);
      else
        last_no_t0 = std::max(last_no_t0, i);
      // the switch must agree with lambda_tilde away from the critical cell
      const double cell = (0.99 - l0 - 0.01) / 49.0;
      if (std::fabs(lam - lt) > cell)
        dichotomy_ok = dichotomy_ok && (run.t0.has_value() == (lam > lt));
    }
    dichotomy_ok = dichotomy_ok && (first_t0 == last_no_t0 + 1);
    report("[3c] turning-time dichotomy over 50 shifts, switch within one cell",
           dichotomy_ok);
  }
  {
    bool escape_ok = true;
    std::string detail;
    for (double lam : {0.2, 0.38, 0.45, 0.6, 0.8}) {
      const OdeRun run = integrate_adiabatic(ModelParams(3, lam, 0.01));
      const double err = std::fabs(run.c_escape - c_infinity(3, lam).c_inf);
      escape_ok = escape_ok && run.escape_time.has_value() && err < 1e-3;
    }
    const OdeRun run2 = integrate_adiabatic(ModelParams(2, 0.3, 0.01));
    escape_ok = escape_ok &&
                std::fabs(run2.c_escape - c_infinity(2, 0.3).c_inf) < 1e-3;
    report("[3d] escape scaling C(T~) matches c_inf to 1e-3", escape_ok);
  }
}

// ------------------------------------------------------------ criteria 4 and 5
void criteria_4_5() {
  const auto suite = linops_check_suite();
  auto value_of = [&](const std::string& needle) {
    for (const auto& r : suite)
      if (r.name.find(needle) != std::string::npos && !r.pass) return false;
    return true;
  };
  bool ops_ok = true;
  for (const char* needle : {"L Qc' = 0", "L LambdaQc = -Qc", "eigenfunction",
                             "Rayleigh", "inverse power", "cubic identity"})
    ops_ok = ops_ok && value_of(needle);
  // fourth-order refinement of the kernel identity
  auto kernel_res = [](const Grid& grid) {
    LinearizedOperator op(3, 1.0, grid);
    std::vector<double> w(grid.n);
    for (int j = 0; j < grid.n; ++j) w[j] = soliton_qc_prime(3, 1.0, grid.node(j));
    const auto lw = op.apply(w);
    double worst = 0.0;
    for (int j = 0; j < grid.n; ++j)
      if (std::fabs(grid.node(j)) < 30.0) worst = std::max(worst, std::fabs(lw[j]));
    return worst;
  };
  const double ratio = kernel_res(Grid(40.96, 4096)) / kernel_res(Grid(40.96, 8192));
  report("[4] operator identities < 1e-6 at dx=0.01 with 4th-order refinement",
         ops_ok && ratio > 8.0 && ratio < 32.0, fmt("refinement ratio=%.1f", ratio));

  bool ac_ok = true;
  for (const char* needle :
       {"(L A_c)'", "A_c(-L) limit", "int A_c Qc", "int A_c yQc", "f3 direct"})
    ac_ok = ac_ok && value_of(needle);
  report("[5] cubic correction profile A_c and f3 dual-route consistency", ac_ok);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
  {
    SolverConfig cfg;
    cfg.half_length = 100.0;
    cfg.n = 2048;
    cfg.cfl_safety = 0.2;
    GkdvSolver s(cfg, 3, 0.0, Medium::uniform(1.0));
    s.set_initial([](double x) { return soliton_qc(3, 1.0, x + 20.0); });
    const auto m0 = s.monitors();
    while (s.time() < 20.0) s.step();
    std::vector<double> d(s.grid().n);
    double base = 0.0;
    for (int j = 0; j < s.grid().n; ++j) {
      const double y = s.grid().node(j) + 20.0 - s.time();
      const double q = soliton_qc(3, 1.0, y);
      const double qp = soliton_qc_prime(3, 1.0, y);
      d[j] = s.field()[j] - q;
      base += q * q + qp * qp;
    }
    const auto dd = spectral_derivative(d, s.grid().half_length);
    double acc = 0.0;
    for (int j = 0; j < s.grid().n; ++j) acc += d[j] * d[j] + dd[j] * dd[j];
    const double h1 = std::sqrt(acc / base);
    const auto m1 = s.monitors();
    const double dea = std::fabs(m1.energy - m0.energy) / std::fabs(m0.energy);
    report("[6a] constant-medium soliton H1 error < 1e-3 over T=20", h1 < 1e-3,
           fmt("err=%.2e", h1));
    report("[6b] E_a drift < 1e-6 relative on the baseline", dea < 1e-6,
           fmt("drift=%.2e", dea));
  }
  {
    SolverConfig cfg;
    cfg.half_length = 100.0;
    cfg.n = 2048;
    cfg.cfl_safety = 0.3;
    GkdvSolver s(cfg, 3, 0.5, Medium::uniform(1.0));
    s.set_initial([](double x) { return soliton_qc(3, 0.3, x - 10.0); });
    while (s.time() < 40.0) s.step();
    const auto fit = fit_soliton(s.state(), 3, Medium::uniform(1.0));
    const double speed = (fit.rho_fit - 10.0) / s.time();
    report("[6c] c < lambda soliton drifts left at c - lambda within 1%",
           fit.valid && std::fabs(speed + 0.2) < 0.002, fmt("speed=%.4f", speed));
  }
  {
    Medium med = Medium::ramp(PotentialSpec(1.0), 0.05);
    SolverConfig cfg;
    cfg.half_length = 150.0;
    cfg.n = 2048;
    cfg.cfl_safety = 0.16;
    GkdvSolver s(cfg, 3, 0.45, med);
    s.set_initial([](double x) { return soliton_qc(3, 1.0, x + 60.0); });
    InvariantTrace trace;
    trace.rows.push_back(s.monitors());
    const long per = std::lround(0.0625 / s.dt());
    long k = 0;
    while (s.time() < 60.0) {
      s.step();
      if (++k % per == 0) trace.rows.push_back(s.monitors());
    }
    trace.finalize();
    const auto r = trace.worst_residuals();
    bool mhat_monotone = true;
    for (size_t i = 1; i < trace.rows.size(); ++i)
      mhat_monotone =
          mhat_monotone && trace.rows[i].mass_hat <= trace.rows[i - 1].mass_hat + 1e-8;
    report("[6d] rate identities (mass, a^{1/m} mass, 1/a mass) < 1e-6",
           r.mass < 1e-6 && r.mass_hat < 1e-6 && r.mass_script < 1e-6,
           fmt("res=(%.1e, %.1e, %.1e)", r.mass, r.mass_hat, r.mass_script));
    report("[6e] weighted mass monotonicity and L1 conservation",
           mhat_monotone && r.l1_drift < 1e-8, fmt("dL1=%.1e", r.l1_drift));
  }
}

// ---------------------------------------------------------------- criterion 7
struct DichotomyRun {
  double lambda = 0.0;
  double eps = 0.0;
  RegimeReport report;
  std::vector<ModulationSample> track;
  bool boundary_abort = false;
  double energy_drift = 0.0;
  double defect = 0.0;
};

DichotomyRun dichotomy_run(double lambda, double eps, double safety,
                           double boundary_tol, double horizon = 0.0) {
  ModelParams params(3, lambda, eps);
  SolverConfig cfg;
  cfg.cfl_safety = safety;
  RunControls rc;
  rc.boundary_tol = boundary_tol;
  if (eps > 0.075) {
    cfg.half_length = 150.0;
    cfg.n = 2048;
    rc.exit_x = 18.0;
  } else if (eps > 0.035) {
    cfg.half_length = 250.0;
    cfg.n = 4096;
    rc.exit_x = 40.0;
  } else {
    cfg.half_length = 450.0;
    cfg.n = 8192;
    rc.exit_x = 70.0;
  }
  if (horizon > 0.0) rc.horizon = horizon;
  const ExperimentResult res = run_experiment(params, cfg, rc);
  DichotomyRun out;
  out.lambda = lambda;
  out.eps = eps;
  out.report = make_regime_report(res.mod_track, params, res.trace.rows.back().mass);
  out.track = res.mod_track;
  out.boundary_abort = res.boundary_abort;
  out.energy_drift = res.trace.worst_residuals().energy_drift;
  out.defect = out.report.defect_final;
  return out;
}

bool is_transmit(const DichotomyRun& r) { return r.report.final_velocity > 0.0; }

void criterion_7(std::vector<DichotomyRun>& defect_cache) {
  const double lt = lambda_tilde(3);
  const double tol_c = 2.0 * std::sqrt(0.05);
  const double tol_m = 3.0 * std::sqrt(0.05);

  const DichotomyRun r38 = dichotomy_run(0.38, 0.05, 0.16, 1e-5);
  defect_cache.push_back(r38);
  report("[7a] lambda=0.38, eps=0.05 transmits with |c+ - c_inf| <= 2 sqrt(eps)",
         !r38.boundary_abort && is_transmit(r38) &&
             r38.report.scaling_error <= tol_c &&
             r38.report.regime_measured == Regime::refraction_small,
         fmt("c+=%.4f vs %.4f, v=%.3f", r38.report.c_plus, r38.report.predicted.c_inf,
             r38.report.final_velocity));
  report("[7a'] refraction run conserves E_a to 1e-6", r38.energy_drift < 1e-6,
         fmt("drift=%.2e", r38.energy_drift));

  const DichotomyRun r60 = dichotomy_run(0.60, 0.05, 0.16, 1e-5);
  report("[7b] lambda=0.60, eps=0.05 reflects with |c+ - c_inf| <= 2 sqrt(eps)",
         !r60.boundary_abort && !is_transmit(r60) &&
             r60.report.scaling_error <= tol_c &&
             r60.report.regime_measured == Regime::reflection,
         fmt("c+=%.4f vs %.4f, v=%.3f", r60.report.c_plus, r60.report.predicted.c_inf,
             r60.report.final_velocity));
  report("[7b'] reflection run conserves E_a to 1e-6", r60.energy_drift < 1e-6,
         fmt("drift=%.2e", r60.energy_drift));

  report("[7c] final mass matches the regime balance to 3 sqrt(eps)",
         r38.report.mass_relative_error <= tol_m &&
             r60.report.mass_relative_error <= tol_m,
         fmt("rel err = %.3f / %.3f", r38.report.mass_relative_error,
             r60.report.mass_relative_error));

  // lambda = 0.45 sits above lambda_tilde = 0.4260, so reflection is the
  // prediction; a lambda0(3) = 2/5 bookkeeping would instead put the threshold
  // at 0.4825 and predict transmission - the measured dynamics decide
  const DichotomyRun r45 = dichotomy_run(0.45, 0.05, 0.16, 1e-5);
  report("[7d] lambda=0.45, eps=0.05 reflects per the lambda0 = 1/3 threshold",
         !is_transmit(r45) && r45.report.scaling_error <= tol_c &&
             r45.report.regime_predicted == Regime::reflection,
         fmt("c+=%.4f vs %.4f, v=%.3f", r45.report.c_plus, r45.report.predicted.c_inf,
             r45.report.final_velocity));
  info("with lambda0(3) = 2/5 the threshold would be 0.4825 and 0.45 would");
  info("transmit; measured: reflection, quantitatively on the c_inf < lambda");
  info("branch - ruling the 2/5 value out dynamically as well");

  // track-level agreement with the reduced flow, sup norm over the run
  {
    bool cmp_ok = true;
    std::string detail;
    for (const DichotomyRun* r : {&r38, &r60}) {
      const OdeRun ode = integrate_adiabatic(ModelParams(3, r->lambda, r->eps));
      const OdeComparison cmp = compare_to_ode(r->track, ode);
      cmp_ok = cmp_ok && cmp.pass;
      detail += fmt("sup_c=%.3f ", cmp.sup_c_error);
    }
    report("[7e] sup|c_fit - C| and velocity vs the reduced flow within tolerance",
           cmp_ok, detail + fmt("(tol %.3f)", std::max(0.1, 2.0 * std::sqrt(0.05))));
  }

  // late-time velocity law and the single turning of the reflected track
  {
    auto velocity_law = [](const DichotomyRun& r) {
      const double expect = r.report.c_plus - r.lambda;
      return std::fabs(r.report.final_velocity - expect) /
             std::max(std::fabs(expect), 0.05);
    };
    const double v38 = velocity_law(r38), v60 = velocity_law(r60);
    int turns = 0;
    int prev_sign = 0;
    for (const auto& sample : r60.track) {
      if (!sample.valid || std::fabs(sample.rho_dot) < 0.02) continue;
      const int sign = sample.rho_dot > 0.0 ? 1 : -1;
      if (prev_sign != 0 && sign != prev_sign) ++turns;
      prev_sign = sign;
    }
    report("[7f] late-time rho_dot equals c+ - lambda within 2%",
           v38 < 0.02 && v60 < 0.02, fmt("rel err %.4f / %.4f", v38, v60));
    report("[7g] reflected track changes direction exactly once", turns == 1,
           fmt("turns=%.0f", static_cast<double>(turns)));
  }

  // scan at eps = 0.05
  std::vector<DichotomyRun> scan05;
  for (double lam : {0.36, 0.39, 0.41, 0.43, 0.45, 0.48, 0.54, 0.60}) {
    if (lam == 0.45)
      scan05.push_back(r45);
    else if (lam == 0.60)
      scan05.push_back(r60);
    else
      scan05.push_back(dichotomy_run(lam, 0.05, 0.3, 1e-3, 900.0));
  }
  bool agree = true;
  double flip_lo = 0.0, flip_hi = 0.0;
  for (size_t i = 0; i < scan05.size(); ++i) {
    const auto& r = scan05[i];
    if (std::fabs(r.lambda - lt) > 0.02)
      agree = agree && (is_transmit(r) == (r.lambda < lt));
    if (i > 0 && is_transmit(scan05[i - 1]) && !is_transmit(r)) {
      flip_lo = scan05[i - 1].lambda;
      flip_hi = r.lambda;
    }
    std::printf("    scan eps=0.05: lambda=%.3f -> %s (v=%+.3f)\n", r.lambda,
                is_transmit(r) ? "transmit" : "reflect", r.report.final_velocity);
  }
  const double dist05 =
      std::max(std::fabs(flip_lo - lt), std::fabs(flip_hi - lt));
  report("[7h] scan regimes agree with classify_regime outside the critical band",
         agree);
  report("[7i] eps=0.05 flip bracket within 0.04 of lambda_tilde",
         flip_hi > 0.0 && dist05 <= 0.04,
         fmt("bracket [%.3f, %.3f], dist=%.3f", flip_lo, flip_hi, dist05));

  // eps = 0.025 scan: flip bracket must tighten toward lambda_tilde
  std::vector<DichotomyRun> scan025;
  for (double lam : {0.415, 0.43, 0.445})
    scan025.push_back(dichotomy_run(lam, 0.025, 0.3, 1e-3, 900.0));
  double flip_lo2 = 0.0, flip_hi2 = 0.0;
  for (size_t i = 0; i < scan025.size(); ++i) {
    const auto& r = scan025[i];
    if (i > 0 && is_transmit(scan025[i - 1]) && !is_transmit(r)) {
      flip_lo2 = scan025[i - 1].lambda;
      flip_hi2 = r.lambda;
    }
    std::printf("    scan eps=0.025: lambda=%.3f -> %s (v=%+.3f)\n", r.lambda,
                is_transmit(r) ? "transmit" : "reflect", r.report.final_velocity);
  }
  const double dist025 =
      std::max(std::fabs(flip_lo2 - lt), std::fabs(flip_hi2 - lt));
  report("[7j] eps=0.025 flip bracket moves toward lambda_tilde",
         flip_hi2 > 0.0 && dist025 < dist05,
         fmt("bracket [%.3f, %.3f], dist=%.3f vs %.3f", flip_lo2, flip_hi2, dist025,
             dist05));
}

// ---------------------------------------------------------------- criterion 8
void criterion_8(const std::vector<DichotomyRun>& defect_cache) {
  std::vector<std::pair<double, double>> defects;  // (eps, defect)
  const DichotomyRun r10 = dichotomy_run(0.38, 0.10, 0.3, 1e-3);
  defects.emplace_back(0.10, r10.defect);
  defects.emplace_back(0.05, defect_cache.front().defect);
  const DichotomyRun r025 = dichotomy_run(0.38, 0.025, 0.3, 1e-4);
  defects.emplace_back(0.025, r025.defect);

  bool monotone = defects[0].second > defects[1].second &&
                  defects[1].second > defects[2].second;
  // log-log least-squares slope over the three points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [eps, d] : defects) {
    const double x = std::log(eps), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  for (const auto& [eps, d] : defects)
    std::printf("    defect: eps=%.3f  |w+|_H1 = %.4f\n", eps, d);
  report("[8] defect scaling: decreasing in eps with log-log slope in [0.3, 2.5]",
         monotone && slope >= 0.3 && slope <= 2.5, fmt("slope=%.2f", slope));
  info("paper's upper bound exponent: 1/2; conjectured lower-bound exponents");
  info("p_2 = p_4 = 1, p_3 = 2 (reported, not asserted)");
}

}  // namespace

int main() {
  std::printf("== gKdV slowly-varying-medium laboratory: acceptance suite ==\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_5();
  criterion_6();
  std::vector<DichotomyRun> defect_cache;
  criterion_7(defect_cache);
  criterion_8(defect_cache);
  std::printf("== %s (%d failing) ==\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
