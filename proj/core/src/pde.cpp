#include "gkdv/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gkdv {

namespace {

// FFTW planning is not thread safe; executions with distinct plans are.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct GkdvSolver::Fft {
  int n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Fft(int n_) : n(n_) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }

  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    std::copy(in.begin(), in.end(), real);
    fftw_execute(fwd);
    const int nh = n / 2 + 1;
    out.resize(nh);
    for (int j = 0; j < nh; ++j) out[j] = {spec[j][0], spec[j][1]};
  }

  // normalized by 1/n
  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
    const int nh = n / 2 + 1;
    for (int j = 0; j < nh; ++j) {
      spec[j][0] = in[j].real();
      spec[j][1] = in[j].imag();
    }
    fftw_execute(bwd);
    out.resize(n);
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) out[j] = real[j] * scale;
  }
};

GkdvSolver::GkdvSolver(const SolverConfig& config, int m, double lambda,
                       const Medium& medium)
    : grid_(config.half_length, config.n), m_(m), lambda_(lambda), medium_(medium) {
  if (m != 2 && m != 3 && m != 4)
    throw std::invalid_argument("GkdvSolver: m must be 2, 3 or 4");
  const int n = grid_.n;
  const int nh = n / 2 + 1;
  a_vals_.resize(n);
  a1_vals_.assign(n, 0.0);
  a1m_0_.resize(n);
  a1m_1_.assign(n, 0.0);
  a1m_3_.assign(n, 0.0);
  apa2_.assign(n, 0.0);
  apa2_dd_.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = grid_.node(j);
    a_vals_[j] = medium_.a_at(x, 0);
    a1m_0_[j] = std::pow(a_vals_[j], 1.0 / m);
    if (medium_.kind == Medium::Kind::ramp) {
      const double r = medium_.eps * x;
      a1_vals_[j] = medium_.a_at(x, 1);
      a1m_1_[j] = potential_pow_eval(medium_.spec, 1.0 / m, r, 1);
      a1m_3_[j] = potential_pow_eval(medium_.spec, 1.0 / m, r, 3);
      apa2_[j] = ap_over_a2_eval(medium_.spec, r, 0);
      apa2_dd_[j] = ap_over_a2_eval(medium_.spec, r, 2);
    }
  }

  k_.resize(nh);
  keep_.assign(nh, 1);
  const double dk = std::numbers::pi / grid_.half_length;
  const int j_cut = static_cast<int>(config.dealias_fraction * (n / 2));
  for (int j = 0; j < nh; ++j) {
    k_[j] = dk * j;
    if (j > j_cut || j == n / 2) keep_[j] = 0;
  }

  // Stability of the integrating-factor RK4 is set by the advective nonlinear
  // term on the retained modes: dt <= 2.8 / (k_cut * s), s ~ m a_max u^{m-1}.
  const double q0 = std::pow(0.5 * (m + 1), 1.0 / (m - 1));
  const double s_nl = m * medium_.a_max() * std::pow(1.1 * q0, m - 1);
  const double k_cut = dk * j_cut;
  const double dt_bound = 2.8 / (k_cut * s_nl);
  if (config.dt > 0.0) {
    if (config.dt > dt_bound) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "GkdvSolver: dt=%g violates the stability bound %g (k_cut=%g, s=%g)",
                    config.dt, dt_bound, k_cut, s_nl);
      throw std::invalid_argument(msg);
    }
    dt_ = config.dt;
  } else {
    dt_ = config.cfl_safety * dt_bound;
  }

  const std::complex<double> i_unit{0.0, 1.0};
  prop_half_.resize(nh);
  for (int j = 0; j < nh; ++j) {
    const double phase = (k_[j] * k_[j] * k_[j] + lambda_ * k_[j]) * 0.5 * dt_;
    prop_half_[j] = std::exp(i_unit * phase);
  }

  u_.assign(n, 0.0);
  uhat_.assign(nh, {0.0, 0.0});
  sa_.resize(nh);
  sb_.resize(nh);
  sc_.resize(nh);
  sd_.resize(nh);
  stage_.resize(nh);
  scratch_.resize(n);
  fft_ = std::make_unique<Fft>(n);
}

GkdvSolver::~GkdvSolver() = default;

void GkdvSolver::set_initial(const std::function<double(double)>& u0) {
  std::vector<double> vals(grid_.n);
  for (int j = 0; j < grid_.n; ++j) vals[j] = u0(grid_.node(j));
  set_initial(vals);
}

void GkdvSolver::set_initial(const std::vector<double>& u0) {
  if (static_cast<int>(u0.size()) != grid_.n)
    throw std::invalid_argument("set_initial: grid mismatch");
  fft_->forward(u0, uhat_);
  for (size_t j = 0; j < uhat_.size(); ++j)
    if (!keep_[j]) uhat_[j] = 0.0;
  fft_->backward(uhat_, u_);
  t_ = 0.0;
  steps_ = 0;
}

void GkdvSolver::nonlinear(const std::vector<std::complex<double>>& v,
                           std::vector<std::complex<double>>& out) {
  fft_->backward(v, scratch_);
  for (int j = 0; j < grid_.n; ++j) {
    const double uj = scratch_[j];
    double um = uj;
    for (int q = 1; q < m_; ++q) um *= uj;
    scratch_[j] = a_vals_[j] * um;
  }
  fft_->forward(scratch_, out);
  const std::complex<double> i_unit{0.0, 1.0};
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = keep_[j] ? -i_unit * k_[j] * out[j] : std::complex<double>{0.0, 0.0};
}

void GkdvSolver::check_finite() const {
  for (double v : u_)
    if (!std::isfinite(v)) {
      char msg[128];
      std::snprintf(msg, sizeof(msg), "GkdvSolver: non-finite field at t=%g (step %ld)",
                    t_, steps_);
      throw std::runtime_error(msg);
    }
}

void GkdvSolver::step() {
  const size_t nh = uhat_.size();
  nonlinear(uhat_, sa_);
  for (size_t j = 0; j < nh; ++j)
    stage_[j] = prop_half_[j] * (uhat_[j] + 0.5 * dt_ * sa_[j]);
  nonlinear(stage_, sb_);
  for (size_t j = 0; j < nh; ++j)
    stage_[j] = prop_half_[j] * uhat_[j] + 0.5 * dt_ * sb_[j];
  nonlinear(stage_, sc_);
  for (size_t j = 0; j < nh; ++j)
    stage_[j] = prop_half_[j] * (prop_half_[j] * uhat_[j] + dt_ * sc_[j]);
  nonlinear(stage_, sd_);
  for (size_t j = 0; j < nh; ++j) {
    const std::complex<double> e = prop_half_[j];
    const std::complex<double> e2 = e * e;
    uhat_[j] =
        e2 * uhat_[j] + dt_ / 6.0 * (e2 * sa_[j] + 2.0 * e * (sb_[j] + sc_[j]) + sd_[j]);
  }
  fft_->backward(uhat_, u_);
  t_ += dt_;
  ++steps_;
  if (steps_ % 50 == 0) check_finite();
}

FieldState GkdvSolver::state() const { return FieldState{grid_, u_, t_}; }

std::vector<double> GkdvSolver::field_derivative() const {
  const size_t nh = uhat_.size();
  std::vector<std::complex<double>> dhat(nh);
  const std::complex<double> i_unit{0.0, 1.0};
  for (size_t j = 0; j < nh; ++j) dhat[j] = i_unit * k_[j] * uhat_[j];
  std::vector<double> ux;
  fft_->backward(dhat, ux);
  return ux;
}

InvariantSample GkdvSolver::monitors() const {
  const int n = grid_.n;
  const double dx = grid_.dx();
  const std::vector<double> ux = field_derivative();
  const double eps = medium_.kind == Medium::Kind::ramp ? medium_.eps : 0.0;

  InvariantSample s;
  s.t = t_;
  double mass = 0.0, l1 = 0.0, e_grad = 0.0, e_nl = 0.0, mhat = 0.0, mscr = 0.0;
  double rate_m = 0.0, rate_mhat = 0.0, rate_mscr = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u = u_[j];
    const double u2 = u * u;
    const double ux2 = ux[j] * ux[j];
    double um1 = u2;  // u^{m+1}
    for (int q = 1; q < m_; ++q) um1 *= u;
    mass += u2;
    l1 += u;
    e_grad += ux2;
    e_nl += a_vals_[j] * um1;
    mhat += a1m_0_[j] * u2;
    mscr += u2 / a_vals_[j];
    rate_m += a1_vals_[j] * um1;
    rate_mhat +=
        -1.5 * a1m_1_[j] * ux2 - 0.5 * (lambda_ * a1m_1_[j] - eps * eps * a1m_3_[j]) * u2;
    rate_mscr += 1.5 * apa2_[j] * ux2 + 0.5 * lambda_ * apa2_[j] * u2 -
                 0.5 * eps * eps * apa2_dd_[j] * u2 - (a1_vals_[j] / a_vals_[j]) * um1;
  }
  s.mass = 0.5 * mass * dx;
  s.l1 = l1 * dx;
  s.energy = (0.5 * e_grad + 0.5 * lambda_ * mass - e_nl / (m_ + 1)) * dx;
  s.mass_hat = 0.5 * mhat * dx;
  s.mass_script = 0.5 * mscr * dx;
  s.mass_rate_formula = -eps / (m_ + 1) * rate_m * dx;
  s.mass_hat_rate_formula = eps * rate_mhat * dx;
  s.mass_script_rate_formula = eps * rate_mscr * dx;
  return s;
}

double GkdvSolver::boundary_tail_fraction(double strip) const {
  const int n = grid_.n;
  double tail = 0.0, total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u2 = u_[j] * u_[j];
    total += u2;
    if (std::fabs(grid_.node(j)) > grid_.half_length - strip) tail += u2;
  }
  return total > 0.0 ? tail / total : 0.0;
}

namespace {

// 4th-order first derivative of a sampled time series (one-sided at the ends).
double series_derivative(const std::vector<InvariantSample>& rows,
                         double (*get)(const InvariantSample&), int i, double h) {
  const int n = static_cast<int>(rows.size());
  auto g = [&](int j) { return get(rows[j]); };
  if (i < 2) {
    const int b = i;
    static constexpr double c0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    static constexpr double c1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
    const double* c = (b == 0) ? c0 : c1;
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += c[k] * g(k);
    return acc / (12.0 * h);
  }
  if (i >= n - 2) {
    static constexpr double c0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    static constexpr double c1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
    const double* c = (i == n - 1) ? c0 : c1;
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += c[k] * g(n - 1 - k);
    return -acc / (12.0 * h);
  }
  return (g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) / (12.0 * h);
}

}  // namespace

void InvariantTrace::finalize() {
  const int n = static_cast<int>(rows.size());
  mass_rate_num.assign(n, 0.0);
  mass_hat_rate_num.assign(n, 0.0);
  mass_script_rate_num.assign(n, 0.0);
  if (n < 5) return;
  const double h = rows[1].t - rows[0].t;
  for (int i = 0; i < n; ++i) {
    mass_rate_num[i] =
        series_derivative(rows, [](const InvariantSample& s) { return s.mass; }, i, h);
    mass_hat_rate_num[i] = series_derivative(
        rows, [](const InvariantSample& s) { return s.mass_hat; }, i, h);
    mass_script_rate_num[i] = series_derivative(
        rows, [](const InvariantSample& s) { return s.mass_script; }, i, h);
  }
}

InvariantTrace::Residuals InvariantTrace::worst_residuals() const {
  Residuals r;
  if (rows.size() < 5 || mass_rate_num.size() != rows.size()) return r;
  const double e0 = rows.front().energy;
  const double l0 = rows.front().l1;
  const int n = static_cast<int>(rows.size());
  for (int i = 2; i < n - 2; ++i) {
    const double scale_m = std::max(std::fabs(rows[i].mass), 1.0);
    r.mass = std::max(r.mass,
                      std::fabs(mass_rate_num[i] - rows[i].mass_rate_formula) / scale_m);
    r.mass_hat = std::max(
        r.mass_hat,
        std::fabs(mass_hat_rate_num[i] - rows[i].mass_hat_rate_formula) / scale_m);
    r.mass_script = std::max(
        r.mass_script,
        std::fabs(mass_script_rate_num[i] - rows[i].mass_script_rate_formula) / scale_m);
    r.energy_drift = std::max(r.energy_drift,
                              std::fabs(rows[i].energy - e0) / std::max(std::fabs(e0), 1e-12));
    r.l1_drift =
        std::max(r.l1_drift, std::fabs(rows[i].l1 - l0) / std::max(std::fabs(l0), 1e-12));
  }
  return r;
}

void write_trace_csv(const InvariantTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << "t,M,dM_dt_num,dM_dt_formula,Ea,L1,Mhat,Mscript,Mscript_rate_num,"
         "Mscript_rate_formula\n";
  char line[400];
  for (size_t i = 0; i < trace.rows.size(); ++i) {
    const InvariantSample& s = trace.rows[i];
    const double mnum = i < trace.mass_rate_num.size() ? trace.mass_rate_num[i] : 0.0;
    const double snum =
        i < trace.mass_script_rate_num.size() ? trace.mass_script_rate_num[i] : 0.0;
    std::snprintf(line, sizeof(line),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t,
                  s.mass, mnum, s.mass_rate_formula, s.energy, s.l1, s.mass_hat,
                  s.mass_script, snum, s.mass_script_rate_formula);
    out << line;
  }
}

}  // namespace gkdv
