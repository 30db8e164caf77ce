#include "gkdv/modulation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "gkdv/soliton.hpp"

namespace gkdv {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double tilde_a_of(const Medium& medium, int m, double x) {
  return std::pow(medium.a_at(x, 0), 1.0 / (m - 1));
}

}  // namespace

std::vector<double> spectral_derivative(const std::vector<double>& u,
                                        double half_length) {
  const int n = static_cast<int>(u.size());
  double* real;
  fftw_complex* spec;
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  std::copy(u.begin(), u.end(), real);
  fftw_execute(fwd);
  const double dk = std::numbers::pi / half_length;
  for (int j = 0; j <= n / 2; ++j) {
    const double k = dk * j;
    const double re = spec[j][0], im = spec[j][1];
    spec[j][0] = -k * im;  // multiply by ik
    spec[j][1] = k * re;
  }
  spec[n / 2][0] = 0.0;  // drop the Nyquist derivative
  spec[n / 2][1] = 0.0;
  fftw_execute(bwd);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = real[j] / n;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }
  return out;
}

std::optional<std::pair<double, double>> locate_peak(const FieldState& state,
                                                     double dominance) {
  const int n = state.grid.n;
  if (n < 8) return std::nullopt;
  int imax = 0;
  double umax = state.u[0];
  double sumsq = 0.0;
  for (int j = 0; j < n; ++j) {
    sumsq += state.u[j] * state.u[j];
    if (state.u[j] > umax) {
      umax = state.u[j];
      imax = j;
    }
  }
  const double rms = std::sqrt(sumsq / n);
  if (!(umax > 0.0) || umax < dominance * rms) return std::nullopt;
  if (imax == 0 || imax == n - 1) return std::nullopt;

  const double um = state.u[imax - 1];
  const double u0 = state.u[imax];
  const double up = state.u[imax + 1];
  double rho, peak;
  if (um > 0.0 && up > 0.0) {
    // log-parabola: exact through second order for the sech-power family
    const double fm = std::log(um), f0 = std::log(u0), fp = std::log(up);
    const double a2 = 0.5 * (fm - 2.0 * f0 + fp);
    const double b = 0.5 * (fp - fm);
    const double delta = (a2 < 0.0) ? -b / (2.0 * a2) : 0.0;
    rho = state.grid.node(imax) + delta * state.grid.dx();
    peak = std::exp(f0 + b * delta + a2 * delta * delta);
  } else {
    const double a2 = 0.5 * (um - 2.0 * u0 + up);
    const double b = 0.5 * (up - um);
    const double delta = (a2 < 0.0) ? -b / (2.0 * a2) : 0.0;
    rho = state.grid.node(imax) + delta * state.grid.dx();
    peak = u0 + b * delta + a2 * delta * delta;
  }
  return std::make_pair(rho, peak);
}

ModulationSample fit_soliton(const FieldState& state, int m, const Medium& medium) {
  ModulationSample s;
  s.t = state.t;
  const auto peak = locate_peak(state);
  if (!peak) return s;  // invalid: post-collapse or dispersive state
  const auto [rho, umax] = *peak;
  const double ta = tilde_a_of(medium, m, rho);
  const double q0 = soliton_q(m, 0.0);
  const double c = std::pow(ta * umax / q0, m - 1);
  if (!(c > 0.0) || !std::isfinite(c)) return s;

  s.rho_fit = rho;
  s.c_fit = c;
  s.kappa_used = 1.0 / ta;

  const int n = state.grid.n;
  std::vector<double> defect(n);
  for (int j = 0; j < n; ++j)
    defect[j] = state.u[j] - soliton_qc(m, c, state.grid.node(j) - rho) / ta;
  const std::vector<double> ddx = spectral_derivative(defect, state.grid.half_length);
  double h1 = 0.0;
  for (int j = 0; j < n; ++j) h1 += defect[j] * defect[j] + ddx[j] * ddx[j];
  s.defect_h1 = std::sqrt(h1 * state.grid.dx());
  s.valid = true;
  return s;
}

std::vector<ModulationSample> track_soliton(std::span<const FieldState> states, int m,
                                            const Medium& medium) {
  std::vector<ModulationSample> out;
  out.reserve(states.size());
  double rho_prev = 0.0;
  bool have_prev = false;
  for (const FieldState& st : states) {
    ModulationSample s = fit_soliton(st, m, medium);
    if (s.valid && have_prev &&
        std::fabs(s.rho_fit - rho_prev) > st.grid.half_length / 4.0) {
      s.valid = false;  // track break: peak jumped too far between samples
    }
    if (s.valid) {
      rho_prev = s.rho_fit;
      have_prev = true;
    }
    out.push_back(s);
  }

  // rho_dot by 5-point Savitzky-Golay first derivative over valid samples
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(out.size()); ++i)
    if (out[i].valid) idx.push_back(i);
  const int nv = static_cast<int>(idx.size());
  for (int q = 0; q < nv; ++q) {
    const int i = idx[q];
    if (q < 2 || q > nv - 3) {
      // ends: centered/one-sided short difference
      const int qa = std::max(0, q - 1), qb = std::min(nv - 1, q + 1);
      if (qa == qb) continue;
      out[i].rho_dot = (out[idx[qb]].rho_fit - out[idx[qa]].rho_fit) /
                       (out[idx[qb]].t - out[idx[qa]].t);
      continue;
    }
    const double h = (out[idx[q + 1]].t - out[idx[q - 1]].t) / 2.0;
    out[i].rho_dot = (-2.0 * out[idx[q - 2]].rho_fit - out[idx[q - 1]].rho_fit +
                      out[idx[q + 1]].rho_fit + 2.0 * out[idx[q + 2]].rho_fit) /
                     (10.0 * h);
  }
  return out;
}

OdeComparison compare_to_ode(std::span<const ModulationSample> track, const OdeRun& ode,
                             double r_align) {
  OdeComparison cmp;
  const double eps = ode.params.eps;
  const double x_align = r_align / eps;

  auto first_crossing_track = [&]() -> std::optional<double> {
    for (size_t i = 1; i < track.size(); ++i) {
      if (!track[i - 1].valid || !track[i].valid) continue;
      const double a = track[i - 1].rho_fit - x_align;
      const double b = track[i].rho_fit - x_align;
      if (a <= 0.0 && b >= 0.0 && b > a) {
        const double w = -a / (b - a);
        return track[i - 1].t + w * (track[i].t - track[i - 1].t);
      }
    }
    return std::nullopt;
  };
  auto first_crossing_ode = [&]() -> std::optional<double> {
    for (size_t i = 1; i < ode.samples.size(); ++i) {
      const double a = ode.samples[i - 1].p - x_align;
      const double b = ode.samples[i].p - x_align;
      if (a <= 0.0 && b >= 0.0 && b > a) {
        const double w = -a / (b - a);
        return ode.samples[i - 1].t + w * (ode.samples[i].t - ode.samples[i - 1].t);
      }
    }
    return std::nullopt;
  };

  const auto tp = first_crossing_track();
  const auto to = first_crossing_ode();
  if (!tp || !to)
    throw std::runtime_error("compare_to_ode: alignment crossing not found on both tracks");
  cmp.t_align_pde = *tp;
  cmp.t_align_ode = *to;
  const double shift = *tp - *to;

  auto ode_at = [&](double t_ode) -> std::optional<std::pair<double, double>> {
    const auto& s = ode.samples;
    if (s.empty() || t_ode < s.front().t || t_ode > s.back().t) return std::nullopt;
    size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (s[mid].t <= t_ode ? lo : hi) = mid;
    }
    const double w = (t_ode - s[lo].t) / (s[hi].t - s[lo].t);
    return std::make_pair(s[lo].c + w * (s[hi].c - s[lo].c),
                          s[lo].p + w * (s[hi].p - s[lo].p));
  };

  cmp.tolerance = std::max(0.1, 2.0 * std::sqrt(eps));
  for (const ModulationSample& s : track) {
    if (!s.valid) continue;
    const auto ref = ode_at(s.t - shift);
    if (!ref) continue;
    cmp.sup_c_error = std::max(cmp.sup_c_error, std::fabs(s.c_fit - ref->first));
    const double v_ode = ref->first - ode.params.lambda;
    cmp.sup_velocity_error = std::max(cmp.sup_velocity_error, std::fabs(s.rho_dot - v_ode));
    ++cmp.compared_samples;
  }
  cmp.pass = cmp.compared_samples > 0 && cmp.sup_c_error <= cmp.tolerance &&
             cmp.sup_velocity_error <= cmp.tolerance;
  return cmp;
}

RegimeReport make_regime_report(std::span<const ModulationSample> track,
                                const ModelParams& params, double final_mass,
                                int late_window) {
  RegimeReport rep;
  std::vector<const ModulationSample*> valid;
  for (const auto& s : track)
    if (s.valid) valid.push_back(&s);
  if (valid.empty()) throw std::runtime_error("make_regime_report: no valid samples");

  const int w = std::min<int>(late_window, static_cast<int>(valid.size()));
  double c_sum = 0.0, v_sum = 0.0;
  for (int i = static_cast<int>(valid.size()) - w; i < static_cast<int>(valid.size()); ++i) {
    c_sum += valid[i]->c_fit;
    v_sum += valid[i]->rho_dot;
  }
  rep.c_plus = c_sum / w;
  rep.final_velocity = v_sum / w;
  rep.defect_final = valid.back()->defect_h1;

  rep.predicted = c_infinity(params.m, params.lambda);
  rep.regime_predicted = rep.predicted.regime;
  rep.regime_measured =
      rep.final_velocity >= 0.0
          ? (params.lambda <= lambda0(params.m) ? Regime::refraction_large
                                                : Regime::refraction_small)
          : Regime::reflection;
  rep.velocity_error = std::fabs(rep.final_velocity - rep.predicted.final_velocity);
  rep.scaling_error = std::fabs(rep.c_plus - rep.predicted.c_inf);
  rep.final_mass = final_mass;
  rep.predicted_final_mass =
      rep.predicted.final_mass_ratio * base_integrals(params.m).mass;
  rep.mass_relative_error =
      std::fabs(final_mass - rep.predicted_final_mass) / rep.predicted_final_mass;
  return rep;
}

void write_track_csv(std::span<const ModulationSample> track, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_track_csv: cannot open " + path);
  out << "t,c_fit,rho_fit,rho_dot,defect_H1,kappa_used,valid\n";
  char line[256];
  for (const auto& s : track) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", s.t,
                  s.c_fit, s.rho_fit, s.rho_dot, s.defect_h1, s.kappa_used,
                  s.valid ? 1 : 0);
    out << line;
  }
}

}  // namespace gkdv
