#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/potential.hpp"

namespace gkdv {

// Coefficient a seen by the flux term: either a constant (baseline runs) or the
// slowly varying ramp a(eps x).
struct Medium {
  enum class Kind { constant, ramp };
  Kind kind = Kind::constant;
  double constant_value = 1.0;
  PotentialSpec spec{1.0};
  double eps = 0.0;

  static Medium uniform(double value) {
    Medium m;
    m.kind = Kind::constant;
    m.constant_value = value;
    return m;
  }
  static Medium ramp(const PotentialSpec& spec, double eps) {
    Medium m;
    m.kind = Kind::ramp;
    m.spec = spec;
    m.eps = eps;
    return m;
  }

  // a^{(deriv)}(eps x): derivative in the slow variable, evaluated at eps x.
  double a_at(double x, int deriv = 0) const {
    if (kind == Kind::constant) return deriv == 0 ? constant_value : 0.0;
    return potential_eval(spec, eps * x, deriv);
  }
  double a_max() const { return kind == Kind::constant ? constant_value : 2.0; }
};

struct SolverConfig {
  double half_length = 200.0;
  int n = 4096;
  double dt = 0.0;  // <= 0: derived from the advective stability bound
  double dealias_fraction = 2.0 / 3.0;
  double cfl_safety = 0.3;
};

// One row of conserved/monotone quantity monitoring, with the analytic rates
// evaluated alongside for residual comparison.
struct InvariantSample {
  double t = 0.0;
  double mass = 0.0;               // M = ∫u²/2
  double mass_rate_formula = 0.0;  // -(ε/(m+1)) ∫ a' u^{m+1}
  double energy = 0.0;             // E_a
  double l1 = 0.0;                 // ∫u
  double mass_hat = 0.0;           // ∫ a^{1/m} u²/2
  double mass_hat_rate_formula = 0.0;
  double mass_script = 0.0;  // ∫ u²/(2a)
  double mass_script_rate_formula = 0.0;
};

struct InvariantTrace {
  std::vector<InvariantSample> rows;
  // numeric d/dt of mass, mass_hat, mass_script by 5-point centered stencils
  std::vector<double> mass_rate_num;
  std::vector<double> mass_hat_rate_num;
  std::vector<double> mass_script_rate_num;

  void finalize();  // fill the numeric-rate columns from the rows

  struct Residuals {
    double mass = 0.0;
    double mass_hat = 0.0;
    double mass_script = 0.0;
    double energy_drift = 0.0;  // relative
    double l1_drift = 0.0;      // relative
  };
  Residuals worst_residuals() const;
};

// InvariantTrace CSV (columns fixed by the external interface).
void write_trace_csv(const InvariantTrace& trace, const std::string& path);

// Pseudospectral integrating-factor RK4 for u_t + (u_xx - λu + a u^m)_x = 0 on
// the periodic box [-L, L): exact linear propagator exp(i(k³+λk)dt); the flux
// a(eps x) u^m formed pointwise in physical space and dealiased by truncation.
class GkdvSolver {
 public:
  GkdvSolver(const SolverConfig& config, int m, double lambda, const Medium& medium);
  ~GkdvSolver();
  GkdvSolver(const GkdvSolver&) = delete;
  GkdvSolver& operator=(const GkdvSolver&) = delete;

  void set_initial(const std::function<double(double)>& u0);
  void set_initial(const std::vector<double>& u0);

  void step();  // advance by dt(); throws on NaN/overflow with diagnostics

  const Grid& grid() const { return grid_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  int m() const { return m_; }
  double lambda() const { return lambda_; }
  const Medium& medium() const { return medium_; }

  FieldState state() const;
  const std::vector<double>& field() const { return u_; }
  std::vector<double> field_derivative() const;

  InvariantSample monitors() const;

  // ∫_{|x| > L-strip} u² / ∫ u²  (domain-size adequacy)
  double boundary_tail_fraction(double strip = 10.0) const;

 private:
  struct Fft;  // fftw plans + buffers

  void nonlinear(const std::vector<std::complex<double>>& v,
                 std::vector<std::complex<double>>& out);
  void check_finite() const;

  Grid grid_;
  int m_;
  double lambda_;
  Medium medium_;
  double dt_ = 0.0;
  double t_ = 0.0;
  long steps_ = 0;

  std::vector<double> a_vals_;    // a(eps x_j)
  std::vector<double> a1_vals_;   // a'(eps x_j)
  std::vector<double> a1m_0_;     // a^{1/m}
  std::vector<double> a1m_1_;     // (a^{1/m})'
  std::vector<double> a1m_3_;     // (a^{1/m})'''
  std::vector<double> apa2_;      // a'/a²
  std::vector<double> apa2_dd_;   // (a'/a²)''
  std::vector<double> k_;         // wavenumbers of the half-spectrum
  std::vector<std::complex<double>> prop_half_;  // exp(i(k³+λk) dt/2)
  std::vector<char> keep_;        // dealias mask

  std::vector<double> u_;                   // physical field (synced)
  std::vector<std::complex<double>> uhat_;  // spectral state
  std::vector<std::complex<double>> sa_, sb_, sc_, sd_, stage_;
  std::vector<double> scratch_;
  std::unique_ptr<Fft> fft_;
};

}  // namespace gkdv
