#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace gkdv {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (positive half; nodes are symmetric).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Gauss-7 weights matching Kronrod nodes 1, 3, 5, 7 (odd indices).
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
  const double hw = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = hw * kKronrodNodes[i];
    const double fsum = (i == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kronrod *= hw;
  gauss *= hw;
  return {kronrod, std::fabs(kronrod - gauss)};
}

template <class F>
double adapt(const F& f, double a, double b, double tol, int depth) {
  auto [value, err] = gk15(f, a, b);
  if (err <= tol || depth <= 0) return value;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of f over [a, b].
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 28) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    return -integrate(f, b, a, abs_tol, max_depth);
  }
  return detail::adapt(f, a, b, abs_tol, max_depth);
}

}  // namespace gkdv
