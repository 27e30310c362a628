// Random fixtures shared by the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "adareg/grid.hpp"

namespace testing {

inline adareg::ScalarGrid random_grid(int w, int h, std::mt19937_64& rng, double lo = -1.0,
                                      double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  adareg::ScalarGrid g(w, h);
  for (double& v : g.values()) v = d(rng);
  return g;
}

inline adareg::VectorGrid random_field(int w, int h, std::mt19937_64& rng, double lo = -1.0,
                                       double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  adareg::VectorGrid g(w, h);
  for (auto& v : g.values()) v = {d(rng), d(rng)};
  return g;
}

// Rounds every component to single precision. The volatile store keeps GCC 11 at -O3 from
// dropping the narrowing in the vectorized loop tail.
inline void round_to_float(adareg::VectorGrid& u) {
  for (adareg::Vec2& v : u.values())
    for (double& c : v) {
      volatile float f = static_cast<float>(c);
      c = f;
    }
}

inline double max_abs_diff(const adareg::ScalarGrid& a, const adareg::ScalarGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Dense Gaussian elimination with partial pivoting; the oracle for the
/// iterative solvers.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// Dense matrix of v -> v - xi * Lap(v) with the Neumann 5-point stencil.
inline std::vector<std::vector<double>> screened_matrix(const adareg::ScalarGrid& xi) {
  const int w = xi.width(), h = xi.height();
  const std::size_t n = xi.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y * w + x);
      a[p][p] = 1.0;
      const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[0] >= w || q[1] < 0 || q[1] >= h) continue;
        const std::size_t qi = static_cast<std::size_t>(q[1] * w + q[0]);
        a[p][p] += xi[p];
        a[p][qi] -= xi[p];
      }
    }
  return a;
}

}  // namespace testing
