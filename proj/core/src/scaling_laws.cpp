#include "gkdv/scaling_laws.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "gkdv/soliton.hpp"

namespace gkdv {

namespace {

// Bisection on a bracket with f(lo), f(hi) of opposite sign (or zero at an end).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-14) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::runtime_error("bisect: endpoints do not bracket a root");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

void require_shift_in_range(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie in [0, 1)");
}

double branch_fn(int m, double lambda, double c, Regime regime) {
  const double l0 = lambda0(m);
  const double p2 = std::pow(2.0, p_exponent(m));
  switch (regime) {
    case Regime::refraction_large:
      return std::pow(c, l0) * std::pow(c - lambda / l0, 1.0 - l0) -
             p2 * std::pow(1.0 - lambda / l0, 1.0 - l0);
    case Regime::refraction_small:
      return std::pow(c, l0) *
                 std::pow((lambda - l0 * c) / (lambda - l0), 1.0 - l0) -
             p2;
    case Regime::reflection:
      return std::pow(c, l0) *
                 std::pow((lambda - l0 * c) / (lambda - l0), 1.0 - l0) -
             1.0;
    case Regime::critical:
      break;
  }
  throw std::invalid_argument("branch_fn: no defining equation for Critical");
}

// Root of the regime's defining equation on its proven-monotone bracket.
double solve_branch(int m, double lambda, Regime regime) {
  const double nudge = 1e-14;
  const double p2 = std::pow(2.0, p_exponent(m));
  auto f = [&](double c) { return branch_fn(m, lambda, c, regime); };
  switch (regime) {
    case Regime::refraction_large:
      if (lambda == lambda0(m)) return 1.0;
      return bisect(f, 1.0, p2 * (1.0 + 1e-12) + nudge);
    case Regime::refraction_small:
      return bisect(f, lambda + nudge, 1.0 - nudge);
    case Regime::reflection:
      return bisect(f, nudge, lambda - nudge);
    case Regime::critical:
      break;
  }
  throw std::invalid_argument("solve_branch: Critical has no branch equation");
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::refraction_large: return "RefractionLarge";
    case Regime::refraction_small: return "RefractionSmall";
    case Regime::critical: return "Critical";
    case Regime::reflection: return "Reflection";
  }
  return "?";
}

double lambda0(int m) {
  require_valid_m(m);
  return static_cast<double>(5 - m) / (m + 3);
}

double p_exponent(int m) {
  require_valid_m(m);
  return 4.0 / (m + 3);
}

double theta(int m) {
  require_valid_m(m);
  // single fraction (5-m)/(4(m-1)) keeps the value exactly rational in binary
  return static_cast<double>(5 - m) / (4 * (m - 1));
}

double mu_floor(int m, double lambda) {
  const double l0 = lambda0(m);
  if (!(lambda > l0))
    throw std::invalid_argument("mu_floor: requires lambda > lambda0");
  return 0.99 * std::pow(1.0 - l0 / lambda, (1.0 - l0) / l0);
}

double xi_m(int m) {
  require_valid_m(m);
  if (m == 3) return 0.0;
  const BaseIntegrals& b = base_integrals(m);
  return (3.0 - m) / ((5.0 - m) * (5.0 - m)) * (b.int_q * b.int_q) / b.int_q2;
}

double xi_tilde3(double lambda) {
  const BaseIntegrals& b = base_integrals(3);
  return 0.5 * lambda * (b.int_q * b.int_q) / b.int_q2;
}

double lambda_tilde(int m) {
  const double l0 = lambda0(m);
  const double target = std::pow(2.0, p_exponent(m));
  // f(λ) = λ((1-λ₀)/(λ-λ₀))^{1-λ₀} decreases from +∞ to 1 on (λ₀, 1)
  auto f = [&](double lam) {
    return lam * std::pow((1.0 - l0) / (lam - l0), 1.0 - l0) - target;
  };
  return bisect(f, l0 + 1e-14, 1.0 - 1e-14);
}

double branch_equation_residual(int m, double lambda, double c, Regime regime) {
  return branch_fn(m, lambda, c, regime);
}

Regime classify_regime(int m, double lambda, double tol) {
  require_shift_in_range(lambda);
  if (lambda <= lambda0(m)) return Regime::refraction_large;
  const double lt = lambda_tilde(m);
  if (std::fabs(lambda - lt) < tol) return Regime::critical;
  return lambda < lt ? Regime::refraction_small : Regime::reflection;
}

ScalingPrediction c_infinity(int m, double lambda, double critical_tol) {
  require_shift_in_range(lambda);
  ScalingPrediction out{};
  out.regime = classify_regime(m, lambda, critical_tol);

  if (out.regime == Regime::critical) {
    out.c_inf = lambda_tilde(m);
    out.kappa = std::pow(2.0, -1.0 / (m - 1));
    out.final_velocity = out.c_inf - lambda;
    out.final_mass_ratio = std::numeric_limits<double>::quiet_NaN();
    out.residual = 0.0;
    return out;
  }

  out.c_inf = solve_branch(m, lambda, out.regime);
  out.kappa = (out.regime == Regime::reflection) ? 1.0 : std::pow(2.0, -1.0 / (m - 1));
  out.final_velocity = out.c_inf - lambda;
  out.final_mass_ratio = final_mass_ratio(m, lambda);
  out.residual = branch_fn(m, lambda, out.c_inf, out.regime);
  return out;
}

double final_mass_ratio(int m, double lambda) {
  const Regime regime = classify_regime(m, lambda);
  if (regime == Regime::critical)
    throw std::invalid_argument("final_mass_ratio: undefined at lambda = lambda_tilde");
  const double c = solve_branch(m, lambda, regime);
  const double two_theta = 2.0 * theta(m);
  if (regime == Regime::reflection) return std::pow(c, two_theta);
  return std::pow(2.0, -2.0 / (m - 1)) * std::pow(c, two_theta);
}

int reflection_branch_sign_changes(int m, double lambda, int n) {
  if (!(lambda > lambda_tilde(m)))
    throw std::invalid_argument(
        "reflection_branch_sign_changes: lambda must exceed lambda_tilde");
  int changes = 0;
  double prev = branch_fn(m, lambda, lambda * 0.5 / n, Regime::reflection);
  for (int i = 1; i < n; ++i) {
    const double c = lambda * (i + 0.5) / n;
    const double cur = branch_fn(m, lambda, c, Regime::reflection);
    if (prev * cur < 0.0) ++changes;
    prev = cur;
  }
  return changes;
}

}  // namespace gkdv
