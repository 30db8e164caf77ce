#pragma once

#include <span>
#include <string>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

// Discretization of L w = -w'' + c w - m Q_c^{m-1} w by 4th-order central
// differences; the outermost two rows on each side use one-sided stencils
// (low accuracy there, diagnostics should stay in the interior).
class LinearizedOperator {
 public:
  LinearizedOperator(int m, double c, const Grid& grid);

  std::vector<double> apply(std::span<const double> w) const;

  // <L u, v> and <u, v> under the trapezoid (periodic-grid) inner product.
  double inner(std::span<const double> u, std::span<const double> v) const;
  double rayleigh_quotient(std::span<const double> w) const;

  // Ground-state eigenvalue by shifted inverse-power iteration on the
  // Dirichlet pentadiagonal form; shift taken just below the seed quotient.
  double ground_state_eigenvalue(std::span<const double> seed, int iters = 30) const;

  int m() const { return m_; }
  double c() const { return c_; }
  const Grid& grid() const { return grid_; }

 private:
  int m_;
  double c_;
  Grid grid_;
  std::vector<double> well_;  // m Q_c^{m-1} at the nodes
};

// 4th-order first derivative of samples on the grid (one-sided at edges).
std::vector<double> derivative4(std::span<const double> w, double dx);

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
};

// Closed-form inverse-function identities of the cubic operator (images of
// Q', yQ, y^2Q', the Q-tail integrals, Q^2 and Q' ln Q), evaluated on the
// grid; residuals measured on |y| <= window.
std::vector<IdentityResidual> cubic_identity_suite(const Grid& grid,
                                                   double window = 20.0);

// Explicit cubic-case correction profile built from the closed forms
//   Ã⁰(s) = ½(1-Q²)∫_s^∞Q - s²Q'/12 - 2sQ/3 + Q' ln Q + μ̃₀ Q'
//   Â⁰(s) = -½(1-Q²)∫_s^∞Q + s²Q'/4 + sQ/2 + Q' ln Q + μ̂₀ Q'
//   A_c(y) = Ã⁰(√c y) + (λ/c) Â⁰(√c y)
// with the constants fixed componentwise by ∫ s Q Ã⁰ = ∫ s Q Â⁰ = 0.
struct CubicCorrection {
  double c = 1.0;
  double lambda = 0.0;
  Grid grid;
  std::vector<double> a_tilde0;  // Ã⁰(√c y) at nodes
  std::vector<double> a_hat0;    // Â⁰(√c y) at nodes
  std::vector<double> a_c;       // combined profile at nodes
  double a_minus_inf = 0.0;      // ½(1-λ/c)∫Q
  double mu_tilde0 = 0.0;
  double mu_hat0 = 0.0;
};

CubicCorrection cubic_ac(double c, double lambda, const Grid& grid);

// Point values of the cubic closed forms (base scale s, constants included).
double a_tilde0_profile(double s);
double a_hat0_profile(double s);
double mu_tilde0_constant();
double mu_hat0_constant();

// Source terms of (L A_c)' = F̃₁ + λ F̂₁ for m = 3:
//   F̃₁(y) = c^{3/2} [p ΛQ - Q/2 + (sQ³)'](√c y),  F̂₁(y) = c^{1/2} [-2ΛQ + Q/2](√c y).
double f1_source_tilde(double c, double y);
double f1_source_hat(double c, double y);

// Quantity computed two ways (quadrature of the source vs closed form).
struct DualRouteValue {
  double quadrature = 0.0;
  double closed_form = 0.0;
};

DualRouteValue beta_c(double c, double lambda);            // (1/2c^{3/2}) ∫(F̃₁+λF̂₁)
DualRouteValue ac_minus_infinity(double c, double lambda);  // -(1/c) ∫(F̃₁+λF̂₁)

struct ModulationCoefficients {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;
  double f4_1 = 0.0;  // a'²/a² weight of f4 (m = 3)
  double f4_2 = 0.0;  // a''/a  weight of f4 (m = 3)
};

struct MediumPointValues {
  double a = 1.0;
  double a_prime = 0.0;
  double a_second = 0.0;
};

// f₁, f₂ (m = 2, 4), f₃ and f₄ (m = 3) at a medium point.
ModulationCoefficients modulation_coefficients(int m, double c, double lambda,
                                               const MediumPointValues& at);

// μ_c = (λ/8c)(c-λ)(∫Q_c)²; the alternative route to f₃.
double mu_c_coefficient(double c, double lambda);
double f3_via_mu_route(double c, double lambda, const MediumPointValues& at);

// The three printed quadratures of f₄¹, reported individually (parity check).
struct F41Parts {
  double first = 0.0;   // (1/3M)(1-3λ/c) ∫ s²Q' [comb]
  double second = 0.0;  // (3/M) ∫ (sQ)' sQ² [comb]
  double third = 0.0;   // (3/M) ∫ (sQ)' Q [comb]²
};
F41Parts f4_1_parts(double c, double lambda);

}  // namespace gkdv
