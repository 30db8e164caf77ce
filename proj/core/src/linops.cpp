#include "gkdv/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gkdv/quadrature.hpp"
#include "gkdv/scaling_laws.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

namespace {

// 4th-order second derivative; one-sided 6-point stencils on the two outermost
// rows of each side.
std::vector<double> second_derivative4(std::span<const double> w, double dx) {
  const int n = static_cast<int>(w.size());
  if (n < 6) throw std::invalid_argument("second_derivative4: need at least 6 samples");
  std::vector<double> out(n);
  const double s = 1.0 / (12.0 * dx * dx);
  static constexpr double edge0[6] = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
  static constexpr double edge1[6] = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};
  auto dot6 = [&](const double* coef, int base, int dir) {
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) acc += coef[k] * w[base + dir * k];
    return acc * s;
  };
  out[0] = dot6(edge0, 0, 1);
  out[1] = dot6(edge1, 0, 1);
  out[n - 1] = dot6(edge0, n - 1, -1);
  out[n - 2] = dot6(edge1, n - 1, -1);
  for (int i = 2; i < n - 2; ++i)
    out[i] = (-w[i - 2] + 16.0 * w[i - 1] - 30.0 * w[i] + 16.0 * w[i + 1] - w[i + 2]) * s;
  return out;
}

double q3(double s) { return soliton_q(3, s); }
double q3p(double s) { return soliton_q_prime(3, s); }
// ∫_s^∞ Q for m = 3: 2√2 atan(e^{-s})
double q3_tail(double s) { return 2.0 * std::numbers::sqrt2 * std::atan(std::exp(-s)); }

double lambda_q3(double s) { return 0.5 * q3(s) + 0.5 * s * q3p(s); }

// base-scale sources of the first linear problem, m = 3
double f1_tilde0(double s) {
  const double q = q3(s);
  const double qp = q3p(s);
  // (sQ³)' = Q³ + 3sQ²Q'
  return (2.0 / 3.0) * lambda_q3(s) - 0.5 * q + q * q * q + 3.0 * s * q * q * qp;
}

double f1_hat0(double s) { return -2.0 * lambda_q3(s) + 0.5 * q3(s); }

double a_tilde0_raw(double s) {
  const double q = q3(s);
  const double qp = q3p(s);
  return 0.5 * (1.0 - q * q) * q3_tail(s) - s * s * qp / 12.0 - 2.0 * s * q / 3.0 +
         qp * std::log(q);
}

double a_hat0_raw(double s) {
  // sign of the Q' ln Q term fixed so that (L0 Ahat0)' = Fhat1_0 closes in the
  // inverse-identity span (the + variant leaves a -4Q''+10QQ'^2+5Q^2Q'' defect)
  const double q = q3(s);
  const double qp = q3p(s);
  return -0.5 * (1.0 - q * q) * q3_tail(s) + 0.25 * s * s * qp + 0.5 * s * q -
         qp * std::log(q);
}

struct CubicConstants {
  double mu_tilde0;
  double mu_hat0;
};

const CubicConstants& cubic_constants() {
  static const CubicConstants k = [] {
    // fix ∫ sQ Ã⁰ = ∫ sQ Â⁰ = 0 through the free Q' component
    const double tail = 45.0;
    const double s_qqp =
        integrate([](double s) { return s * q3(s) * q3p(s); }, -tail, tail, 1e-13);
    const double s_q_at =
        integrate([](double s) { return s * q3(s) * a_tilde0_raw(s); }, -tail, tail, 1e-13);
    const double s_q_ah =
        integrate([](double s) { return s * q3(s) * a_hat0_raw(s); }, -tail, tail, 1e-13);
    return CubicConstants{-s_q_at / s_qqp, -s_q_ah / s_qqp};
  }();
  return k;
}

}  // namespace

double mu_tilde0_constant() { return cubic_constants().mu_tilde0; }
double mu_hat0_constant() { return cubic_constants().mu_hat0; }

double a_tilde0_profile(double s) {
  return a_tilde0_raw(s) + cubic_constants().mu_tilde0 * q3p(s);
}

double a_hat0_profile(double s) {
  return a_hat0_raw(s) + cubic_constants().mu_hat0 * q3p(s);
}

double f1_source_tilde(double c, double y) {
  require_positive_scaling(c);
  return std::pow(c, 1.5) * f1_tilde0(std::sqrt(c) * y);
}

double f1_source_hat(double c, double y) {
  require_positive_scaling(c);
  return std::sqrt(c) * f1_hat0(std::sqrt(c) * y);
}

LinearizedOperator::LinearizedOperator(int m, double c, const Grid& grid)
    : m_(m), c_(c), grid_(grid), well_(grid.n) {
  require_valid_m(m);
  require_positive_scaling(c);
  for (int j = 0; j < grid_.n; ++j)
    well_[j] = m * std::pow(soliton_qc(m, c, grid_.node(j)), m - 1);
}

std::vector<double> LinearizedOperator::apply(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != grid_.n)
    throw std::invalid_argument("LinearizedOperator::apply: grid mismatch");
  std::vector<double> out = second_derivative4(w, grid_.dx());
  for (int j = 0; j < grid_.n; ++j) out[j] = -out[j] + (c_ - well_[j]) * w[j];
  return out;
}

double LinearizedOperator::inner(std::span<const double> u,
                                 std::span<const double> v) const {
  double acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) acc += u[j] * v[j];
  return acc * grid_.dx();
}

double LinearizedOperator::rayleigh_quotient(std::span<const double> w) const {
  const std::vector<double> lw = apply(w);
  return inner(lw, w) / inner(w, w);
}

double LinearizedOperator::ground_state_eigenvalue(std::span<const double> seed,
                                                   int iters) const {
  const int n = grid_.n;
  const double h2 = grid_.dx() * grid_.dx();
  const double s = 1.0 / (12.0 * h2);
  // Dirichlet pentadiagonal form of the operator (symmetric)
  std::vector<double> a0(n), a1(n, 16.0 * s), a2(n, -s);
  const double shift = rayleigh_quotient(seed);
  const double sigma = shift - std::max(std::fabs(shift), 1.0) * 1e-3;
  for (int i = 0; i < n; ++i) a0[i] = 30.0 * s + c_ - well_[i] - sigma;
  // a1/a2 hold A[i][i+1] = -16 s, A[i][i+2] = s (sign from -w'')
  for (int i = 0; i < n; ++i) {
    a1[i] = -16.0 * s;
    a2[i] = s;
  }

  // LDL^T, bandwidth 2
  std::vector<double> d(n), l1(n, 0.0), l2(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double aim1 = (i >= 1) ? a1[i - 1] : 0.0;
    double aim2 = (i >= 2) ? a2[i - 2] : 0.0;
    l2[i] = (i >= 2) ? aim2 / d[i - 2] : 0.0;
    l1[i] = (i >= 1) ? (aim1 - ((i >= 2) ? l2[i] * d[i - 2] * l1[i - 1] : 0.0)) / d[i - 1]
                     : 0.0;
    d[i] = a0[i] - ((i >= 1) ? l1[i] * l1[i] * d[i - 1] : 0.0) -
           ((i >= 2) ? l2[i] * l2[i] * d[i - 2] : 0.0);
    if (!(d[i] > 0.0))
      throw std::runtime_error("ground_state_eigenvalue: shifted operator not SPD");
  }

  std::vector<double> x(seed.begin(), seed.end()), y(n);
  for (int it = 0; it < iters; ++it) {
    // forward substitution L y = x
    for (int i = 0; i < n; ++i)
      y[i] = x[i] - ((i >= 1) ? l1[i] * y[i - 1] : 0.0) -
             ((i >= 2) ? l2[i] * y[i - 2] : 0.0);
    for (int i = 0; i < n; ++i) y[i] /= d[i];
    // back substitution L^T x = y
    for (int i = n - 1; i >= 0; --i)
      x[i] = y[i] - ((i + 1 < n) ? l1[i + 1] * x[i + 1] : 0.0) -
             ((i + 2 < n) ? l2[i + 2] * x[i + 2] : 0.0);
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
  }

  // Rayleigh quotient of the converged vector under the Dirichlet matrix
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double av = (30.0 * s + c_ - well_[i]) * x[i];
    if (i >= 1) av += -16.0 * s * x[i - 1];
    if (i + 1 < n) av += -16.0 * s * x[i + 1];
    if (i >= 2) av += s * x[i - 2];
    if (i + 2 < n) av += s * x[i + 2];
    num += av * x[i];
    den += x[i] * x[i];
  }
  return num / den;
}

std::vector<double> derivative4(std::span<const double> w, double dx) {
  const int n = static_cast<int>(w.size());
  if (n < 5) throw std::invalid_argument("derivative4: need at least 5 samples");
  std::vector<double> out(n);
  const double s = 1.0 / (12.0 * dx);
  static constexpr double edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
  static constexpr double edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
  auto dot5 = [&](const double* coef, int base, int dir) {
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += coef[k] * w[base + dir * k];
    return acc * s * dir;
  };
  out[0] = dot5(edge0, 0, 1);
  out[1] = dot5(edge1, 0, 1);
  out[n - 1] = dot5(edge0, n - 1, -1);
  out[n - 2] = dot5(edge1, n - 1, -1);
  for (int i = 2; i < n - 2; ++i)
    out[i] = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) * s;
  return out;
}

std::vector<IdentityResidual> cubic_identity_suite(const Grid& grid, double window) {
  LinearizedOperator op(3, 1.0, grid);
  const int n = grid.n;
  std::vector<double> x = grid.nodes();

  struct Item {
    std::string name;
    std::vector<double> w;
    std::vector<double> rhs;
  };
  std::vector<Item> items;
  auto add = [&](std::string name, auto wf, auto rf) {
    Item it{std::move(name), std::vector<double>(n), std::vector<double>(n)};
    for (int j = 0; j < n; ++j) {
      it.w[j] = wf(x[j]);
      it.rhs[j] = rf(x[j]);
    }
    items.push_back(std::move(it));
  };

  add("L0(Q') = 0", [](double s) { return q3p(s); }, [](double) { return 0.0; });
  add("L0(yQ) = -2yQ^3 - 2Q'", [](double s) { return s * q3(s); },
      [](double s) {
        const double q = q3(s);
        return -2.0 * s * q * q * q - 2.0 * q3p(s);
      });
  add("L0(y^2 Q') = -4yQ + 4yQ^3 - 2Q'", [](double s) { return s * s * q3p(s); },
      [](double s) {
        const double q = q3(s);
        return -4.0 * s * q + 4.0 * s * q * q * q - 2.0 * q3p(s);
      });
  add("L0(int_y Q) = (1-3Q^2) int_y Q + Q'", [](double s) { return q3_tail(s); },
      [](double s) {
        const double q = q3(s);
        return (1.0 - 3.0 * q * q) * q3_tail(s) + q3p(s);
      });
  add("L0(Q^2 int_y Q) = -3Q^2 int_y Q + 5Q^2 Q'",
      [](double s) {
        const double q = q3(s);
        return q * q * q3_tail(s);
      },
      [](double s) {
        const double q = q3(s);
        return -3.0 * q * q * q3_tail(s) + 5.0 * q * q * q3p(s);
      });
  add("L0(Q^2) = -3Q^2",
      [](double s) {
        const double q = q3(s);
        return q * q;
      },
      [](double s) {
        const double q = q3(s);
        return -3.0 * q * q;
      });
  add("L0(Q' ln Q) = -2Q' + (5/2)Q^2 Q'",
      [](double s) { return q3p(s) * std::log(q3(s)); },
      [](double s) {
        const double q = q3(s);
        return -2.0 * q3p(s) + 2.5 * q * q * q3p(s);
      });

  std::vector<IdentityResidual> out;
  for (auto& it : items) {
    const std::vector<double> lw = op.apply(it.w);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      if (std::fabs(x[j]) > window) continue;
      worst = std::max(worst, std::fabs(lw[j] - it.rhs[j]));
    }
    out.push_back({it.name, worst});
  }
  return out;
}

CubicCorrection cubic_ac(double c, double lambda, const Grid& grid) {
  require_positive_scaling(c);
  CubicCorrection out;
  out.c = c;
  out.lambda = lambda;
  out.grid = grid;
  out.mu_tilde0 = mu_tilde0_constant();
  out.mu_hat0 = mu_hat0_constant();
  const int n = grid.n;
  out.a_tilde0.resize(n);
  out.a_hat0.resize(n);
  out.a_c.resize(n);
  const double rc = std::sqrt(c);
  const double w = lambda / c;
  for (int j = 0; j < n; ++j) {
    const double s = rc * grid.node(j);
    out.a_tilde0[j] = a_tilde0_profile(s);
    out.a_hat0[j] = a_hat0_profile(s);
    out.a_c[j] = out.a_tilde0[j] + w * out.a_hat0[j];
  }
  out.a_minus_inf = 0.5 * (1.0 - w) * base_integrals(3).int_q;
  return out;
}

DualRouteValue beta_c(double c, double lambda) {
  require_positive_scaling(c);
  const double tail = 45.0 / std::sqrt(c);
  DualRouteValue out;
  const double total = integrate(
      [&](double y) { return f1_source_tilde(c, y) + lambda * f1_source_hat(c, y); },
      -tail, tail, 1e-12);
  out.quadrature = total / (2.0 * std::pow(c, 1.5));
  const double int_qc = soliton_integrals(3, c).int_qc;
  out.closed_form = -0.25 * (c - lambda) * int_qc / std::pow(c, 1.5);
  return out;
}

DualRouteValue ac_minus_infinity(double c, double lambda) {
  DualRouteValue b = beta_c(c, lambda);
  // lim_{-infty} A_c = -2 sqrt(c) beta_c
  return {-2.0 * std::sqrt(c) * b.quadrature, -2.0 * std::sqrt(c) * b.closed_form};
}

double mu_c_coefficient(double c, double lambda) {
  require_positive_scaling(c);
  const double int_qc = soliton_integrals(3, c).int_qc;
  return lambda / (8.0 * c) * (c - lambda) * int_qc * int_qc;
}

double f3_via_mu_route(double c, double lambda, const MediumPointValues& at) {
  const double ap_over_a = at.a_prime / at.a;
  return mu_c_coefficient(c, lambda) / int_lambda_qc_qc(3, c) * ap_over_a * ap_over_a;
}

F41Parts f4_1_parts(double c, double lambda) {
  require_positive_scaling(c);
  const double w = lambda / c;
  const double mass = base_integrals(3).mass;
  auto comb = [&](double s) { return a_tilde0_profile(s) + w * a_hat0_profile(s); };
  const double tail = 45.0;
  F41Parts parts;
  parts.first = (1.0 - 3.0 * w) / (3.0 * mass) *
                integrate([&](double s) { return s * s * q3p(s) * comb(s); }, -tail,
                          tail, 1e-12);
  parts.second =
      3.0 / mass *
      integrate(
          [&](double s) {
            const double q = q3(s);
            const double syq_prime = q + s * q3p(s);  // (sQ)'
            return syq_prime * s * q * q * comb(s);
          },
          -tail, tail, 1e-12);
  parts.third =
      3.0 / mass *
      integrate(
          [&](double s) {
            const double q = q3(s);
            const double syq_prime = q + s * q3p(s);
            const double cb = comb(s);
            return syq_prime * q * cb * cb;
          },
          -tail, tail, 1e-12);
  return parts;
}

ModulationCoefficients modulation_coefficients(int m, double c, double lambda,
                                               const MediumPointValues& at) {
  require_valid_m(m);
  require_positive_scaling(c);
  ModulationCoefficients out;
  const double ap_over_a = at.a_prime / at.a;
  out.f1 = p_exponent(m) * c * (c - lambda / lambda0(m)) * ap_over_a;
  out.f2 = (m == 3) ? 0.0
                    : -xi_m(m) / std::sqrt(c) * (lambda - 3.0 * lambda0(m) * c) * ap_over_a;
  if (m == 3) {
    out.f3 = xi_tilde3(lambda) / std::sqrt(c) * (c - lambda) * ap_over_a * ap_over_a;
    const F41Parts parts = f4_1_parts(c, lambda);
    out.f4_1 = parts.first + parts.second + parts.third;
    out.f4_2 = integrate([](double s) {
                 const double q = q3(s);
                 return s * s * q * q * q * q;
               },
                         -45.0, 45.0, 1e-12) /
               (8.0 * base_integrals(3).mass);
    out.f4 = out.f4_1 * ap_over_a * ap_over_a + out.f4_2 * at.a_second / at.a;
  }
  return out;
}

}  // namespace gkdv
