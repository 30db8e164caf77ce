#pragma once

#include <string>
#include <vector>

namespace gkdv {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured residual / error
  double threshold = 0.0;  // pass iff value < threshold (inf = report-only)
  bool pass = true;
};

// Closed-form profile identities: ODE residual of Q, scaling closures of the
// quadrature laws, the ΛQ_c exponent, the energy identity, kink limits,
// potential hypothesis diagnostics.
std::vector<CheckResult> profiles_check_suite();

// Discrete operator identities: kernel, ΛQ_c inverse, first eigenvalue (with
// Rayleigh and inverse-power cross-checks), the cubic inverse-function suite,
// the cubic correction profile A_c, the dual-route coefficients, coercivity.
std::vector<CheckResult> linops_check_suite();

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace gkdv
