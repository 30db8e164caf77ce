#include "gkdv/potential.hpp"

#include <algorithm>
#include <cmath>

namespace gkdv {

double potential_eval(const PotentialSpec& spec, double r, int deriv) {
  const double g = spec.gamma;
  const double u = g * r;
  const double th = std::tanh(u);
  const double sech2 = 1.0 - th * th;
  switch (deriv) {
    case 0:
      return 1.5 + 0.5 * th;
    case 1:
      return 0.5 * g * sech2;
    case 2:
      return -g * g * sech2 * th;
    case 3:
      return -g * g * g * sech2 * (sech2 - 2.0 * th * th);
    default:
      throw std::invalid_argument("potential_eval: deriv must be in 0..3");
  }
}

double tilde_a(const PotentialSpec& spec, int m, double r) {
  return std::pow(potential_eval(spec, r, 0), 1.0 / (m - 1));
}

double potential_pow_eval(const PotentialSpec& spec, double q, double r, int deriv) {
  const double a = potential_eval(spec, r, 0);
  if (deriv == 0) return std::pow(a, q);
  const double a1 = potential_eval(spec, r, 1);
  if (deriv == 1) return q * std::pow(a, q - 1.0) * a1;
  const double a2 = potential_eval(spec, r, 2);
  if (deriv == 2)
    return q * (q - 1.0) * std::pow(a, q - 2.0) * a1 * a1 +
           q * std::pow(a, q - 1.0) * a2;
  const double a3 = potential_eval(spec, r, 3);
  if (deriv == 3)
    return q * (q - 1.0) * (q - 2.0) * std::pow(a, q - 3.0) * a1 * a1 * a1 +
           3.0 * q * (q - 1.0) * std::pow(a, q - 2.0) * a1 * a2 +
           q * std::pow(a, q - 1.0) * a3;
  throw std::invalid_argument("potential_pow_eval: deriv must be in 0..3");
}

double ap_over_a2_eval(const PotentialSpec& spec, double r, int deriv) {
  const double a = potential_eval(spec, r, 0);
  const double a1 = potential_eval(spec, r, 1);
  if (deriv == 0) return a1 / (a * a);
  const double a2 = potential_eval(spec, r, 2);
  if (deriv == 1) return a2 / (a * a) - 2.0 * a1 * a1 / (a * a * a);
  const double a3 = potential_eval(spec, r, 3);
  if (deriv == 2)
    return a3 / (a * a) - 6.0 * a1 * a2 / (a * a * a) +
           6.0 * a1 * a1 * a1 / (a * a * a * a);
  throw std::invalid_argument("ap_over_a2_eval: deriv must be in 0..2");
}

double potential_hypothesis_ratio(const PotentialSpec& spec, int m, double r_max,
                                  int samples) {
  const double q = 1.0 / m;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = -r_max + 2.0 * r_max * i / (samples - 1);
    const double d1 = potential_pow_eval(spec, q, r, 1);
    const double d3 = potential_pow_eval(spec, q, r, 3);
    if (d1 > 0.0) worst = std::max(worst, std::fabs(d3) / d1);
  }
  return worst;
}

}  // namespace gkdv
