#pragma once

#include <stdexcept>
#include <vector>

namespace gkdv {

// Uniform symmetric grid on [-L, L) with N a power of two, x_j = -L + j dx.
struct Grid {
  double half_length = 0.0;
  int n = 0;

  Grid() = default;
  Grid(double half_length_, int n_) : half_length(half_length_), n(n_) {
    if (!(half_length > 0.0)) throw std::invalid_argument("Grid: L must be > 0");
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid: N must be a power of two >= 8");
  }

  double dx() const { return 2.0 * half_length / n; }
  double node(int j) const { return -half_length + j * dx(); }

  std::vector<double> nodes() const {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = node(j);
    return x;
  }
};

// PDE state: real field samples at the grid nodes at time t.
struct FieldState {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
};

}  // namespace gkdv
