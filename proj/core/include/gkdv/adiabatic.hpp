#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkdv/potential.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

// Fixed physical scenario: nonlinearity, shift, slowness, medium.
struct ModelParams {
  int m = 3;
  double lambda = 0.0;
  double eps = 0.05;
  PotentialSpec potential{1.0};

  ModelParams() = default;
  ModelParams(int m_, double lambda_, double eps_, PotentialSpec pot = PotentialSpec{1.0})
      : m(m_), lambda(lambda_), eps(eps_), potential(pot) {
    require_valid_m(m);
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw std::invalid_argument("ModelParams: lambda must lie in [0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("ModelParams: eps must be > 0");
  }
};

// Reduced flow of the scaling/position pair:
//   C' = ε f₁(C, P),  P' = C - λ,
//   f₁(C, P) = p C (C - λ/λ₀) a'(εP)/a(εP).
double scaling_rate_f1(const ModelParams& params, double c, double p);

// First integral λ₀ ln C + (1-λ₀) ln|C - λ/λ₀| - p ln a(εP).
// Undefined on C = 0 and C = λ/λ₀.
double first_integral(const ModelParams& params, double c, double p);

struct OdeSample {
  double t = 0.0;
  double c = 0.0;
  double p = 0.0;
  double first_integral = 0.0;
  double a_at_p = 0.0;
};

struct OdeConfig {
  double dt = 0.05;            // fixed RK4 step; <= 0 picks min(0.01/eps, 0.05)
  double kappa = 0.0;          // start-time factor; <= 0 picks 8/gamma
  bool paper_start_time = false;  // use T_eps = eps^{-1-1/100}/(1-λ) instead
  double horizon_factor = 12.0;   // integrate to horizon_factor * t_start
  int sample_stride = 20;         // keep every n-th step in the sample record
};

struct OdeRun {
  ModelParams params;
  OdeConfig config;
  double t_start = 0.0;  // integration begins at t = -t_start
  std::vector<OdeSample> samples;
  std::optional<double> t0;           // scaling crossing C = λ (reflection only)
  std::optional<double> escape_time;  // position back at ±(1-λ) t_start
  double c_escape = 0.0;              // C at the escape event (or at horizon)
  bool horizon_exhausted = false;
};

// RK4 trajectory from C(-T) = 1, P(-T) = -(1-λ)T with event detection for the
// turning time t₀ and the escape time (secant refinement over single RK4 steps).
OdeRun integrate_adiabatic(const ModelParams& params, const OdeConfig& config = {});

struct EscapeBoundReport {
  std::optional<double> t0_over_t_start;
  std::optional<double> escape_over_t_start;
  std::optional<double> eps_p_at_t0;
  bool finite = false;  // all detected events happened before the horizon
  // worst violation of the refraction position bound, after the P=0 crossing
  double max_p_over_bound = 0.0;
};

EscapeBoundReport escape_bound_check(const OdeRun& run);

// Trajectory CSV: t, C, P, first_integral, a(eps P).
void write_ode_csv(const OdeRun& run, const std::string& path);

}  // namespace gkdv
