#pragma once

#include <string>

namespace gkdv {

// Side of the refraction/reflection dichotomy a shift value lands on.
enum class Regime {
  refraction_large,  // λ ≤ λ₀: nonpositive energy, c_∞ ≥ 1
  refraction_small,  // λ₀ < λ < λ̃: transmission with λ < c_∞ < 1
  critical,          // λ = λ̃ within tolerance: open case, flagged not predicted
  reflection,        // λ̃ < λ < 1: turnaround with μ(λ) < c_∞ < λ
};

const char* regime_name(Regime r);

// Exact rational constants of the mass/energy bookkeeping.
double lambda0(int m);     // (5-m)/(m+3), shift at which E₁[Q] vanishes
double p_exponent(int m);  // 4/(m+3), exponent of the medium factor a^p
double theta(int m);       // 1/(m-1) - 1/4, mass scaling exponent

// Lower bound on the adiabatic scaling, μ(λ) = 0.99 (1 - λ₀/λ)^{(1-λ₀)/λ₀}.
// Defined for λ > λ₀ only.
double mu_floor(int m, double lambda);

// Quadrature-backed prefactors of the modulation corrections.
double xi_m(int m);               // (3-m)/(5-m)² (∫Q)²/∫Q²; zero for m = 3
double xi_tilde3(double lambda);  // (λ/2) (∫Q)²/∫Q² with m = 3 integrals

// Critical shift: unique root in (λ₀, 1) of λ((1-λ₀)/(λ-λ₀))^{1-λ₀} = 2^p.
double lambda_tilde(int m);

struct ScalingPrediction {
  double c_inf = 0.0;
  Regime regime = Regime::refraction_large;
  double final_velocity = 0.0;    // c_inf - λ
  double final_mass_ratio = 0.0;  // M[u](+∞) / M[Q]
  double kappa = 1.0;             // soliton prefactor: 2^{-1/(m-1)} right, 1 left
  double residual = 0.0;          // defining equation evaluated at the root
};

// Final scaling from the energy balance, branch selected by regime:
//   λ ≤ λ₀ : c^{λ₀}(c-λ/λ₀)^{1-λ₀} = 2^p (1-λ/λ₀)^{1-λ₀}, root in [1, 2^p]
//   λ₀<λ<λ̃: c^{λ₀}((λ-λ₀c)/(λ-λ₀))^{1-λ₀} = 2^p,         root in (λ, 1)
//   λ̃<λ<1 : c^{λ₀}((λ-λ₀c)/(λ-λ₀))^{1-λ₀} = 1,           root in (0, λ)
// The critical band |λ-λ̃| < tol returns the degenerate c_inf = λ̃, flagged.
ScalingPrediction c_infinity(int m, double lambda, double critical_tol = 1e-9);

// M[u](+∞)/M[Q]: 2^{-2/(m-1)} c_∞^{2θ} (refraction) or c_∞^{2θ} (reflection).
// Rejects the critical band.
double final_mass_ratio(int m, double lambda);

Regime classify_regime(int m, double lambda, double tol = 1e-9);

// Residual of the branch's defining equation at a trial c (diagnostics).
double branch_equation_residual(int m, double lambda, double c, Regime regime);

// Sign-change count of the reflection-branch equation on an n-point grid in
// (0, λ); the uniqueness claim is reported, not assumed.
int reflection_branch_sign_changes(int m, double lambda, int n = 2000);

}  // namespace gkdv
