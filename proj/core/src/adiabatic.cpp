#include "gkdv/adiabatic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gkdv/scaling_laws.hpp"

namespace gkdv {

double scaling_rate_f1(const ModelParams& params, double c, double p) {
  if (!(c >= 0.0)) throw std::invalid_argument("scaling_rate_f1: C must be >= 0");
  const double r = params.eps * p;
  const double a = potential_eval(params.potential, r, 0);
  const double a1 = potential_eval(params.potential, r, 1);
  return p_exponent(params.m) * c * (c - params.lambda / lambda0(params.m)) * a1 / a;
}

double first_integral(const ModelParams& params, double c, double p) {
  const double l0 = lambda0(params.m);
  const double line = params.lambda / l0;
  if (!(c > 0.0) || std::fabs(c - line) < 1e-150)
    throw std::domain_error("first_integral: undefined on C = 0 or C = lambda/lambda0");
  return l0 * std::log(c) + (1.0 - l0) * std::log(std::fabs(c - line)) -
         p_exponent(params.m) * std::log(potential_eval(params.potential, params.eps * p, 0));
}

namespace {

struct Flow {
  const ModelParams& params;

  void rhs(double c, double p, double& dc, double& dp) const {
    dc = params.eps * scaling_rate_f1(params, c, p);
    dp = c - params.lambda;
  }

  // One classical RK4 step of size h.
  void step(double h, double& c, double& p) const {
    double k1c, k1p, k2c, k2p, k3c, k3p, k4c, k4p;
    rhs(c, p, k1c, k1p);
    rhs(c + 0.5 * h * k1c, p + 0.5 * h * k1p, k2c, k2p);
    rhs(c + 0.5 * h * k2c, p + 0.5 * h * k2p, k3c, k3p);
    rhs(c + h * k3c, p + h * k3p, k4c, k4p);
    c += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
};

double safe_first_integral(const ModelParams& params, double c, double p) {
  const double line = params.lambda / lambda0(params.m);
  if (!(c > 0.0) || std::fabs(c - line) < 1e-14)
    return std::numeric_limits<double>::quiet_NaN();
  return first_integral(params, c, p);
}

// Refine the zero of g(state after step of size tau) on tau in [0, dt]
// by secant iteration; each evaluation is a single RK4 step from (c0, p0).
template <class G>
double refine_event(const Flow& flow, double c0, double p0, double dt, const G& g,
                    double* c_at = nullptr, double* p_at = nullptr) {
  double lo = 0.0, hi = dt;
  double glo = g(c0, p0);
  double c_hi = c0, p_hi = p0;
  flow.step(dt, c_hi, p_hi);
  double ghi = g(c_hi, p_hi);
  double tau = hi;
  double c_tau = c_hi, p_tau = p_hi;
  for (int it = 0; it < 60; ++it) {
    if (ghi == glo) break;
    tau = hi - ghi * (hi - lo) / (ghi - glo);
    if (!(tau > 0.0 && tau < dt)) tau = 0.5 * (lo + hi);
    c_tau = c0;
    p_tau = p0;
    flow.step(tau, c_tau, p_tau);
    const double gt = g(c_tau, p_tau);
    if (std::fabs(gt) < 1e-14 || hi - lo < 1e-13 * dt) break;
    if (glo * gt < 0.0) {
      hi = tau;
      ghi = gt;
    } else {
      lo = tau;
      glo = gt;
    }
  }
  if (c_at) *c_at = c_tau;
  if (p_at) *p_at = p_tau;
  return tau;
}

}  // namespace

OdeRun integrate_adiabatic(const ModelParams& params, const OdeConfig& config_in) {
  OdeRun run;
  run.params = params;
  run.config = config_in;
  OdeConfig& cfg = run.config;
  if (cfg.dt <= 0.0) cfg.dt = std::min(0.01 / params.eps, 0.05);
  if (cfg.kappa <= 0.0) cfg.kappa = 8.0 / params.potential.gamma;

  const double one_minus_lambda = 1.0 - params.lambda;
  run.t_start = cfg.paper_start_time
                    ? std::pow(params.eps, -1.0 - 0.01) / one_minus_lambda
                    : cfg.kappa / (params.eps * one_minus_lambda);

  const double p_exit = one_minus_lambda * run.t_start;
  const double horizon = cfg.horizon_factor * run.t_start;
  const Flow flow{params};
  const bool can_turn = params.lambda > lambda0(params.m);

  double t = -run.t_start;
  double c = 1.0;
  double p = -p_exit;
  const double dt = cfg.dt;

  auto record = [&](double tt, double cc, double pp) {
    run.samples.push_back({tt, cc, pp, safe_first_integral(params, cc, pp),
                           potential_eval(params.potential, params.eps * pp, 0)});
  };
  record(t, c, p);

  long step_index = 0;
  while (t < horizon) {
    const double c_prev = c, p_prev = p;
    flow.step(dt, c, p);
    t += dt;
    ++step_index;

    if (can_turn && !run.t0 && (c_prev - params.lambda) * (c - params.lambda) < 0.0) {
      double c_ev, p_ev;
      const double tau = refine_event(
          flow, c_prev, p_prev, dt,
          [&](double cc, double) { return cc - params.lambda; }, &c_ev, &p_ev);
      run.t0 = t - dt + tau;
    }

    const bool outbound_right = !run.t0 && p_prev < p_exit && p >= p_exit;
    const bool outbound_left = run.t0 && p_prev > -p_exit && p <= -p_exit;
    if (outbound_right || outbound_left) {
      const double target = outbound_right ? p_exit : -p_exit;
      double c_ev, p_ev;
      const double tau = refine_event(
          flow, c_prev, p_prev, dt,
          [&](double, double pp) { return pp - target; }, &c_ev, &p_ev);
      run.escape_time = t - dt + tau;
      run.c_escape = c_ev;
      record(*run.escape_time, c_ev, p_ev);
      return run;
    }

    if (step_index % cfg.sample_stride == 0) record(t, c, p);
  }

  run.horizon_exhausted = true;
  run.c_escape = c;
  record(t, c, p);
  return run;
}

EscapeBoundReport escape_bound_check(const OdeRun& run) {
  EscapeBoundReport rep;
  if (run.t0) rep.t0_over_t_start = *run.t0 / run.t_start;
  if (run.escape_time) rep.escape_over_t_start = *run.escape_time / run.t_start;
  rep.finite = !run.horizon_exhausted;
  if (run.t0) {
    // locate P(t0) from the nearest recorded samples
    double best = std::numeric_limits<double>::infinity();
    double p_at = 0.0;
    for (const auto& s : run.samples) {
      const double d = std::fabs(s.t - *run.t0);
      if (d < best) {
        best = d;
        p_at = s.p;
      }
    }
    rep.eps_p_at_t0 = run.params.eps * p_at;
  }
  if (run.params.lambda <= lambda0(run.params.m)) {
    // refraction position bound (1-lambda)t' <= P <= 1.01(c_inf-lambda)t',
    // clocked from the midpoint crossing P = 0 (the desk-scale start shifts it)
    double t_cross = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 1; i < run.samples.size(); ++i) {
      if (run.samples[i - 1].p <= 0.0 && run.samples[i].p > 0.0) {
        const double w = -run.samples[i - 1].p / (run.samples[i].p - run.samples[i - 1].p);
        t_cross = run.samples[i - 1].t + w * (run.samples[i].t - run.samples[i - 1].t);
        break;
      }
    }
    const double c_inf = c_infinity(run.params.m, run.params.lambda).c_inf;
    double worst = 0.0;
    if (std::isfinite(t_cross)) {
      for (const auto& s : run.samples) {
        const double dt_c = s.t - t_cross;
        if (dt_c <= 1.0) continue;
        const double lower = (1.0 - run.params.lambda) * dt_c;
        const double upper = 1.01 * (c_inf - run.params.lambda) * dt_c;
        worst = std::max(worst, std::max(lower - s.p, s.p - upper) / dt_c);
      }
    }
    rep.max_p_over_bound = worst;
  }
  return rep;
}

void write_ode_csv(const OdeRun& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_ode_csv: cannot open " + path);
  out << "t,C,P,first_integral,a_eps_P\n";
  char line[256];
  for (const auto& s : run.samples) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.c,
                  s.p, s.first_integral, s.a_at_p);
    out << line;
  }
}

}  // namespace gkdv
