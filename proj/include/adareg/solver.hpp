// Shared ADMM scaffolding.
//
// Every problem splits u = v with scaled dual w and alternates
//
//     weights (nu, lambda) -> data auxiliary r -> regularizer auxiliary z
//     -> u -> v -> w += u - v
//
// run_admm() only drives iterations; the per-problem update sequence lives in
// the problem type (see denoise.hpp, segment.hpp, flow.hpp).
#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "adareg/adaptive.hpp"
#include "adareg/grid.hpp"
#include "adareg/prox.hpp"

namespace adareg {

struct SolverParams {
  HuberThreshold mu{0.16};   // data term
  HuberThreshold eta{0.08};  // regularizer
  double theta = 1.0;        // augmentation weight
  AdaptiveParams adaptive;
  int max_iters = 300;
  double tol_primal = 1e-6;
  int check_every = 1;
  int gs_sweeps = 20;  // Gauss-Seidel sweeps per v-update

  void validate() const;
};

/// Default parameters for the three problems.
SolverParams denoise_defaults();
SolverParams segment_defaults();
SolverParams flow_defaults();

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double primal_residual = 0.0;  // |u - v| / sqrt(#pixels)
  double mean_lambda = 0.0;
};

using History = std::vector<IterationRecord>;

struct AdmmReport {
  History history;
  int iterations = 0;
  bool converged = false;
};

/// Raised when the energy stops being finite.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(int iteration)
      : std::runtime_error("divergence detected at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

template <class P>
concept AdmmProblem = requires(P& p, const P& cp) {
  p.step();
  { cp.energy() } -> std::convertible_to<double>;
  { cp.primal_residual() } -> std::convertible_to<double>;
  { cp.mean_lambda() } -> std::convertible_to<double>;
};

/// Runs problem.step() until max_iters, or until the primal residual at a
/// check point (every check_every-th iteration) drops to tol_primal. The
/// optional observer sees the problem after every iteration.
template <AdmmProblem P>
AdmmReport run_admm(P& problem, const SolverParams& params,
                    const std::function<void(int, const P&)>& observer = {}) {
  AdmmReport report;
  for (int it = 1; it <= params.max_iters; ++it) {
    problem.step();
    report.iterations = it;
    if (observer) observer(it, problem);
    if (it % params.check_every != 0 && it != params.max_iters) continue;
    IterationRecord rec{it, problem.energy(), problem.primal_residual(), problem.mean_lambda()};
    if (!std::isfinite(rec.energy) || !std::isfinite(rec.primal_residual))
      throw DivergenceError(it);
    report.history.push_back(rec);
    if (rec.primal_residual <= params.tol_primal) {
      report.converged = true;
      break;
    }
  }
  return report;
}

/// Red-black Gauss-Seidel sweeps for
///
///     v - xi * laplacian(v) = rhs
///
/// with pointwise xi >= 0 and the Neumann 5-point Laplacian. v holds the
/// initial guess and receives the result.
void solve_screened(ScalarGrid& v, const ScalarGrid& rhs, const ScalarGrid& xi, int sweeps);

/// Right-hand side u + w - xi * div z of the v-update.
ScalarGrid screened_rhs(const ScalarGrid& u, const ScalarGrid& w, const ScalarGrid& xi,
                        const VectorGrid& z);

/// xi = (1 - lambda) / (eta * theta).
ScalarGrid screening_weight(const ScalarGrid& lambda, double eta, double theta);

/// Header `iter,energy,primal_residual,mean_lambda`, classic locale.
void write_history_csv(std::ostream& os, const History& history);

}  // namespace adareg
