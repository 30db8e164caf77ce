#pragma once

#include <stdexcept>

namespace gkdv {

// Shifted-tanh medium profile a(r) = 1 + (1 + tanh(gamma r))/2.
// Strictly increasing, 1 < a < 2, exponentially flat at both ends.
struct PotentialSpec {
  double gamma = 1.0;

  explicit PotentialSpec(double gamma_ = 1.0) : gamma(gamma_) {
    if (!(gamma > 0.0)) throw std::invalid_argument("PotentialSpec: gamma must be > 0");
  }
};

// d^k/dr^k a(r) for k = 0..3.
double potential_eval(const PotentialSpec& spec, double r, int deriv = 0);

// tilde a = a^{1/(m-1)}, the soliton shape factor of the modulated ansatz.
double tilde_a(const PotentialSpec& spec, int m, double r);

// d^k/dr^k [a^q](r) for k = 0..3 (chain rule on the analytic a-derivatives).
double potential_pow_eval(const PotentialSpec& spec, double q, double r, int deriv);

// d^k/dr^k [a'(r)/a^2(r)] for k = 0..2; weight appearing in the 1/a-mass rate.
double ap_over_a2_eval(const PotentialSpec& spec, double r, int deriv);

// Numerical scan of the decay-domination ratio max |(a^{1/m})'''| / (a^{1/m})'
// over a uniform sample grid.  Finite for this family; reported, not assumed.
double potential_hypothesis_ratio(const PotentialSpec& spec, int m,
                                  double r_max = 30.0, int samples = 6001);

}  // namespace gkdv
