#include "adareg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adareg/parallel.hpp"

namespace adareg {

HuberThreshold::HuberThreshold(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("Huber threshold must be positive");
}

double huber(double x, double mu) {
  const double a = std::abs(x);
  return a <= mu ? x * x / (2.0 * mu) : a - 0.5 * mu;
}

double huber_vec(const Vec2& v, double mu) { return huber(std::hypot(v[0], v[1]), mu); }

double huber_aniso(const Vec2& v, double mu) { return huber(v[0], mu) + huber(v[1], mu); }

double shrink(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

Vec2 shrink_vec(const Vec2& v, double t) {
  const double n = std::hypot(v[0], v[1]);
  if (n <= t) return {0.0, 0.0};
  const double s = 1.0 - t / n;
  return {v[0] * s, v[1] * s};
}

Vec2 shrink_aniso(const Vec2& v, double t) { return {shrink(v[0], t), shrink(v[1], t)}; }

EnvelopeSample moreau_envelope_bruteforce(double x, double mu, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  const double bound = std::abs(x) + mu;
  const long n = static_cast<long>(std::ceil(bound / grid_step));
  EnvelopeSample best{std::abs(x) + x * x, 0.0};
  bool first = true;
  for (long k = -n; k <= n; ++k) {
    const double r = static_cast<double>(k) * grid_step;
    const double v = std::abs(r) + (x - r) * (x - r) / (2.0 * mu);
    if (first || v < best.value) {
      best = {v, r};
      first = false;
    }
  }
  return best;
}

ScalarGrid project_nonneg(const ScalarGrid& u) {
  ScalarGrid out = u;
  for (double& v : out.values()) v = std::max(0.0, v);
  return out;
}

std::vector<ScalarGrid> project_sum_to_one(std::vector<ScalarGrid> stack) {
  if (stack.empty()) throw std::invalid_argument("empty label stack");
  for (const auto& g : stack) require_same_shape(stack.front(), g, "project_sum_to_one");
  const int w = stack.front().width();
  const double n = static_cast<double>(stack.size());
  parallel_rows(stack.front().height(), [&](int y) {
    for (int x = 0; x < w; ++x) {
      double total = 0.0;
      for (const auto& g : stack) total += g(x, y);
      const double shift = (total - 1.0) / n;
      for (auto& g : stack) g(x, y) -= shift;
    }
  });
  return stack;
}

}  // namespace adareg
