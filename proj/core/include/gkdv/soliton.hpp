#pragma once

#include <stdexcept>

namespace gkdv {

// Nonlinearity exponent of the gKdV flux term; only the subcritical trio is allowed.
struct Nonlinearity {
  int m;

  explicit Nonlinearity(int m_) : m(m_) {
    if (m != 2 && m != 3 && m != 4)
      throw std::invalid_argument("Nonlinearity: m must be 2, 3 or 4");
  }
};

inline void require_valid_m(int m) {
  if (m != 2 && m != 3 && m != 4)
    throw std::invalid_argument("m must be 2, 3 or 4");
}

inline void require_positive_scaling(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("soliton scaling c must be > 0");
}

// Ground state of Q'' - Q + Q^m = 0:
//   Q(x) = [(m+1) / (2 cosh^2((m-1)x/2))]^{1/(m-1)}.
double soliton_q(int m, double x);
double soliton_q_prime(int m, double x);
double soliton_q_second(int m, double x);

// Scaled family Q_c(y) = c^{1/(m-1)} Q(sqrt(c) y), c > 0.
double soliton_qc(int m, double c, double y);
double soliton_qc_prime(int m, double c, double y);

// Generator of the scaling family, d/dc Q_c = (1/c)[Q_c/(m-1) + y Q_c'/2].
double lambda_qc(int m, double c, double y);

// Logarithmic-derivative kink -Q_c'/Q_c = sqrt(c) tanh((m-1) sqrt(c) y / 2).
double phi_c(int m, double c, double y);

// Base-scale quadratures of Q, computed once per m and cached.
struct BaseIntegrals {
  double int_q;        // ∫ Q
  double int_q2;       // ∫ Q²
  double int_qm1;      // ∫ Q^{m+1}
  double int_qprime2;  // ∫ Q'²
  double mass;         // M[Q] = ∫ Q² / 2
};
const BaseIntegrals& base_integrals(int m);

// Scaled quadratures and the energy coefficient, all closed under the c-power laws.
struct SolitonIntegrals {
  int m;
  double c;
  double int_qc;    // ∫ Q_c   = c^{θ-1/4} ∫ Q
  double int_qc2;   // ∫ Q_c²  = c^{2θ} ∫ Q²
  double int_qcm1;  // ∫ Q_c^{m+1} = 2(m+1) c^{2θ+1} ∫Q² / (m+3)

  // E₁[Q_c] as a function of the shift: c^{2θ} (λ - λ₀ c) M[Q].
  double e1(double lambda) const;
};
SolitonIntegrals soliton_integrals(int m, double c);

// ∫ ΛQ_c and ∫ ΛQ_c Q_c (c-power laws, base integrals cached).
double int_lambda_qc(int m, double c);
double int_lambda_qc_qc(int m, double c);

}  // namespace gkdv
