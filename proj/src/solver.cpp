#include "adareg/solver.hpp"

#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include "adareg/parallel.hpp"

namespace adareg {

void SolverParams::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(tol_primal > 0.0)) throw std::invalid_argument("tol_primal must be positive");
  if (check_every < 1) throw std::invalid_argument("check_every must be positive");
  if (gs_sweeps < 1) throw std::invalid_argument("gs_sweeps must be positive");
  adaptive.validate();
}

SolverParams denoise_defaults() {
  SolverParams p;
  p.mu = HuberThreshold(0.16);
  p.eta = HuberThreshold(0.08);
  p.theta = 1.0;
  p.adaptive.alpha = 0.01;
  p.adaptive.beta = 1.0;
  return p;
}

SolverParams segment_defaults() {
  SolverParams p;
  p.mu = HuberThreshold(0.5);
  p.eta = HuberThreshold(0.5);
  p.theta = 1.0;
  p.adaptive.alpha = 0.01;
  p.adaptive.beta = 10.0;
  return p;
}

SolverParams flow_defaults() {
  SolverParams p;
  p.mu = HuberThreshold(0.01);
  p.eta = HuberThreshold(0.3);
  p.theta = 0.1;
  p.adaptive.alpha = 0.01;
  p.adaptive.beta = 10.0;
  p.max_iters = 50;
  return p;
}

void solve_screened(ScalarGrid& v, const ScalarGrid& rhs, const ScalarGrid& xi, int sweeps) {
  require_same_shape(v, rhs, "solve_screened");
  require_same_shape(v, xi, "solve_screened");
  const int w = v.width(), h = v.height();
  for (int s = 0; s < sweeps; ++s) {
    for (int color = 0; color < 2; ++color) {
      parallel_rows(h, [&](int y) {
        for (int x = (y + color) % 2; x < w; x += 2) {
          const double c = v(x, y);
          double diff = 0.0;
          int n = 0;
          if (x > 0) diff += v(x - 1, y) - c, ++n;
          if (x + 1 < w) diff += v(x + 1, y) - c, ++n;
          if (y > 0) diff += v(x, y - 1) - c, ++n;
          if (y + 1 < h) diff += v(x, y + 1) - c, ++n;
          const double k = xi(x, y);
          // Correction form of v = (rhs + k * sum_q v_q) / (1 + k n): exact
          // for fields that already satisfy the equation. Unscreened pixels
          // take rhs as is.
          v(x, y) = k == 0.0 ? rhs(x, y) : c + (rhs(x, y) - c + k * diff) / (1.0 + k * n);
        }
      });
    }
  }
}

ScalarGrid screened_rhs(const ScalarGrid& u, const ScalarGrid& w, const ScalarGrid& xi,
                        const VectorGrid& z) {
  const ScalarGrid div_z = divergence(z);
  ScalarGrid rhs(u.width(), u.height());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = u[i] + w[i] - xi[i] * div_z[i];
  return rhs;
}

ScalarGrid screening_weight(const ScalarGrid& lambda, double eta, double theta) {
  ScalarGrid xi = lambda;
  const double scale = 1.0 / (eta * theta);
  for (double& v : xi.values()) v = (1.0 - v) * scale;
  return xi;
}

void write_history_csv(std::ostream& os, const History& history) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  out << "iter,energy,primal_residual,mean_lambda\n";
  for (const auto& r : history)
    out << r.iter << ',' << r.energy << ',' << r.primal_residual << ',' << r.mean_lambda << '\n';
  os << out.str();
}

}  // namespace adareg
