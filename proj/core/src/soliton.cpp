#include "gkdv/soliton.hpp"

#include <array>
#include <cmath>

#include "gkdv/quadrature.hpp"
#include "gkdv/scaling_laws.hpp"

namespace gkdv {

double soliton_q(int m, double x) {
  require_valid_m(m);
  const double ch = std::cosh(0.5 * (m - 1) * x);
  return std::pow(0.5 * (m + 1) / (ch * ch), 1.0 / (m - 1));
}

double soliton_q_prime(int m, double x) {
  // (ln Q)' = -tanh((m-1)x/2) for every m
  return -soliton_q(m, x) * std::tanh(0.5 * (m - 1) * x);
}

double soliton_q_second(int m, double x) {
  const double q = soliton_q(m, x);
  return q - std::pow(q, m);
}

double soliton_qc(int m, double c, double y) {
  require_positive_scaling(c);
  return std::pow(c, 1.0 / (m - 1)) * soliton_q(m, std::sqrt(c) * y);
}

double soliton_qc_prime(int m, double c, double y) {
  require_positive_scaling(c);
  return std::pow(c, 1.0 / (m - 1)) * std::sqrt(c) *
         soliton_q_prime(m, std::sqrt(c) * y);
}

double lambda_qc(int m, double c, double y) {
  require_positive_scaling(c);
  return (soliton_qc(m, c, y) / (m - 1) + 0.5 * y * soliton_qc_prime(m, c, y)) / c;
}

double phi_c(int m, double c, double y) {
  require_valid_m(m);
  require_positive_scaling(c);
  return std::sqrt(c) * std::tanh(0.5 * (m - 1) * std::sqrt(c) * y);
}

const BaseIntegrals& base_integrals(int m) {
  require_valid_m(m);
  static const std::array<BaseIntegrals, 3> cache = [] {
    std::array<BaseIntegrals, 3> out{};
    for (int mm = 2; mm <= 4; ++mm) {
      // Q decays like e^{-|x|}; [-40, 40] leaves a tail below 1e-16.
      const double tail = 40.0;
      BaseIntegrals b{};
      b.int_q = integrate([mm](double x) { return soliton_q(mm, x); }, -tail, tail, 1e-14);
      b.int_q2 = integrate([mm](double x) { const double q = soliton_q(mm, x); return q * q; },
                           -tail, tail, 1e-14);
      b.int_qm1 = integrate([mm](double x) { return std::pow(soliton_q(mm, x), mm + 1); },
                            -tail, tail, 1e-14);
      b.int_qprime2 = integrate([mm](double x) { const double qp = soliton_q_prime(mm, x); return qp * qp; },
                                -tail, tail, 1e-14);
      b.mass = 0.5 * b.int_q2;
      out[mm - 2] = b;
    }
    return out;
  }();
  return cache[m - 2];
}

double SolitonIntegrals::e1(double lambda) const {
  return std::pow(c, 2.0 * theta(m)) * (lambda - lambda0(m) * c) * base_integrals(m).mass;
}

SolitonIntegrals soliton_integrals(int m, double c) {
  require_positive_scaling(c);
  const BaseIntegrals& b = base_integrals(m);
  const double th = theta(m);
  SolitonIntegrals out{};
  out.m = m;
  out.c = c;
  out.int_qc = std::pow(c, th - 0.25) * b.int_q;
  out.int_qc2 = std::pow(c, 2.0 * th) * b.int_q2;
  out.int_qcm1 = std::pow(c, 2.0 * th + 1.0) * b.int_qm1;
  return out;
}

double int_lambda_qc(int m, double c) {
  require_positive_scaling(c);
  // d/dc ∫Q_c = d/dc [c^{θ-1/4}] ∫Q; exponent θ-5/4, not the printed θ-1/4
  const double th = theta(m);
  return (th - 0.25) * std::pow(c, th - 1.25) * base_integrals(m).int_q;
}

double int_lambda_qc_qc(int m, double c) {
  require_positive_scaling(c);
  const double th = theta(m);
  return th * std::pow(c, 2.0 * th - 1.0) * base_integrals(m).int_q2;
}

}  // namespace gkdv
