// Adaptive Huber-Huber denoising.
//
//     min_u  sum_x lambda huber(f - u, mu) + (1 - lambda) huber(|grad u|, eta)
//
// solved by ADMM on the split u = v, starting from u = f.
#pragma once

#include "adareg/solver.hpp"

namespace adareg {

struct DenoiseState {
  ScalarGrid f;
  ScalarGrid u, v, w;
  ScalarGrid r;
  VectorGrid z;
  ScalarGrid lambda;
};

/// u = v = f, w = r = 0, z = 0, lambda from the initial residual.
DenoiseState init_denoise(const ScalarGrid& f, const SolverParams& params);

/// huber(f - u, mu) pointwise.
ScalarGrid denoise_residual(const DenoiseState& s, double mu);

/// Envelope form |r| + (f - u - r)^2 / (2 mu) with the stored r; this is the
/// residual that drives the weight step.
ScalarGrid denoise_envelope_residual(const DenoiseState& s, double mu);

ScalarGrid update_r(const DenoiseState& s, double mu);

/// Pointwise solve of (lambda + mu theta) u = mu theta (v - w) + lambda (f - r).
ScalarGrid update_u(const DenoiseState& s, const SolverParams& params);

/// Screened solve (1 - xi Lap) v = u + w - xi div z, xi = (1-lambda)/(eta theta).
ScalarGrid update_v(const DenoiseState& s, const SolverParams& params);

/// Energy with the Huber forms and the current lambda.
double denoise_energy(const DenoiseState& s, const SolverParams& params);

class DenoiseProblem {
public:
  DenoiseProblem(const ScalarGrid& f, const SolverParams& params);

  /// One iteration: nu, lambda, r, z, u, v, w.
  void step();

  double energy() const { return denoise_energy(state_, params_); }
  double primal_residual() const;
  double mean_lambda() const { return mean(state_.lambda); }

  const DenoiseState& state() const { return state_; }

private:
  DenoiseState state_;
  SolverParams params_;
};

struct DenoiseResult {
  ScalarGrid u;
  ScalarGrid lambda;
  AdmmReport report;
};

DenoiseResult run_denoise(const ScalarGrid& f, const SolverParams& params,
                          const std::function<void(int, const DenoiseProblem&)>& observer = {});

}  // namespace adareg
