#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gkdv/adiabatic.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/pde.hpp"
#include "gkdv/scaling_laws.hpp"

namespace gkdv {

struct ModulationSample {
  double t = 0.0;
  double c_fit = 0.0;
  double rho_fit = 0.0;
  double rho_dot = 0.0;
  double defect_h1 = 0.0;
  double kappa_used = 1.0;  // 1/ã(ε ρ), the medium-implied soliton prefactor
  bool valid = false;
};

// Spectral d/dx of samples on [-L, L) (transient FFTW plan, planner-locked).
std::vector<double> spectral_derivative(const std::vector<double>& u,
                                        double half_length);

// Peak position by local log-parabola interpolation around the argmax.
// Returns nullopt when there is no dominant positive peak.
std::optional<std::pair<double, double>> locate_peak(const FieldState& state,
                                                     double dominance = 3.0);

// Amplitude-based modulation fit: rho from the interpolated peak, c from
// inverting u_max = c^{1/(m-1)} Q(0) / ã(ε rho), defect in discrete H¹.
ModulationSample fit_soliton(const FieldState& state, int m, const Medium& medium);

// Continuity-enforced fit of a snapshot series; rho_dot by a 5-point local
// quadratic (Savitzky-Golay) derivative.
std::vector<ModulationSample> track_soliton(std::span<const FieldState> states, int m,
                                            const Medium& medium);

struct OdeComparison {
  double sup_c_error = 0.0;
  double sup_velocity_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double t_align_pde = 0.0;  // track time at the alignment crossing
  double t_align_ode = 0.0;
  int compared_samples = 0;
};

// Align the PDE track and the reduced-flow trajectory at their first crossing
// of eps*position = r_align, then compare scaling and velocity in sup norm
// against tol = max(0.1, 2 sqrt(eps)).
OdeComparison compare_to_ode(std::span<const ModulationSample> track,
                             const OdeRun& ode, double r_align = -2.0);

struct RegimeReport {
  Regime regime_measured = Regime::refraction_large;
  Regime regime_predicted = Regime::refraction_large;
  double c_plus = 0.0;
  double final_velocity = 0.0;
  ScalingPrediction predicted;
  double velocity_error = 0.0;
  double scaling_error = 0.0;
  double defect_final = 0.0;
  double final_mass = 0.0;
  double predicted_final_mass = 0.0;
  double mass_relative_error = 0.0;
};

// Late-time measured state vs the algebraic prediction; the measured regime is
// the sign of the late-time velocity.
RegimeReport make_regime_report(std::span<const ModulationSample> track,
                                const ModelParams& params, double final_mass,
                                int late_window = 10);

void write_track_csv(std::span<const ModulationSample> track, const std::string& path);

}  // namespace gkdv
