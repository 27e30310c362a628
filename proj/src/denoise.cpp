#include "adareg/denoise.hpp"

#include <cmath>

#include "adareg/parallel.hpp"

namespace adareg {

DenoiseState init_denoise(const ScalarGrid& f, const SolverParams& params) {
  DenoiseState s;
  s.f = f;
  s.u = f;
  s.v = f;
  s.w = ScalarGrid(f.width(), f.height());
  s.r = ScalarGrid(f.width(), f.height());
  s.z = VectorGrid(f.width(), f.height());
  s.lambda = weight_fields(denoise_envelope_residual(s, params.mu), params.adaptive).lambda;
  return s;
}

ScalarGrid denoise_residual(const DenoiseState& s, double mu) {
  ScalarGrid rho(s.f.width(), s.f.height());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = huber(s.f[i] - s.u[i], mu);
  return rho;
}

ScalarGrid denoise_envelope_residual(const DenoiseState& s, double mu) {
  ScalarGrid rho(s.f.width(), s.f.height());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double e = s.f[i] - s.u[i] - s.r[i];
    rho[i] = std::abs(s.r[i]) + e * e / (2.0 * mu);
  }
  return rho;
}

ScalarGrid update_r(const DenoiseState& s, double mu) {
  ScalarGrid r(s.f.width(), s.f.height());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = shrink(s.f[i] - s.u[i], mu);
  return r;
}

ScalarGrid update_u(const DenoiseState& s, const SolverParams& params) {
  const double mt = params.mu * params.theta;
  ScalarGrid u(s.f.width(), s.f.height());
  const int w = u.width();
  parallel_rows(u.height(), [&](int y) {
    for (int x = 0; x < w; ++x) {
      const double base = s.v(x, y) - s.w(x, y);
      const double data = s.f(x, y) - s.r(x, y);
      const double l = s.lambda(x, y);
      // Same solution as ((mt * base + l * data) / (l + mt)), written as a
      // correction so that base == data reproduces base exactly.
      u(x, y) = base + l * (data - base) / (l + mt);
    }
  });
  return u;
}

ScalarGrid update_v(const DenoiseState& s, const SolverParams& params) {
  const ScalarGrid xi = screening_weight(s.lambda, params.eta, params.theta);
  const ScalarGrid rhs = screened_rhs(s.u, s.w, xi, s.z);
  ScalarGrid v = s.v;
  solve_screened(v, rhs, xi, params.gs_sweeps);
  return v;
}

double denoise_energy(const DenoiseState& s, const SolverParams& params) {
  const VectorGrid g = gradient(s.u);
  const int w = s.f.width();
  return sum_rows(s.f.height(), [&](int y) {
    double e = 0.0;
    for (int x = 0; x < w; ++x) {
      const double l = s.lambda(x, y);
      e += l * huber(s.f(x, y) - s.u(x, y), params.mu) +
           (1.0 - l) * huber_vec(g(x, y), params.eta);
    }
    return e;
  });
}

DenoiseProblem::DenoiseProblem(const ScalarGrid& f, const SolverParams& params)
    : state_(init_denoise(f, params)), params_(params) {
  params_.validate();
}

void DenoiseProblem::step() {
  auto& s = state_;
  s.lambda = weight_fields(denoise_envelope_residual(s, params_.mu), params_.adaptive).lambda;
  s.r = update_r(s, params_.mu);
  const VectorGrid gv = gradient(s.v);
  for (std::size_t i = 0; i < gv.size(); ++i) s.z[i] = shrink_vec(gv[i], params_.eta);
  s.u = update_u(s, params_);
  s.v = update_v(s, params_);
  for (std::size_t i = 0; i < s.w.size(); ++i) s.w[i] += s.u[i] - s.v[i];
}

double DenoiseProblem::primal_residual() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < state_.u.size(); ++i) {
    const double d = state_.u[i] - state_.v[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(state_.u.size()));
}

DenoiseResult run_denoise(const ScalarGrid& f, const SolverParams& params,
                          const std::function<void(int, const DenoiseProblem&)>& observer) {
  DenoiseProblem problem(f, params);
  AdmmReport report = run_admm(problem, params, observer);
  return {problem.state().u, problem.state().lambda, std::move(report)};
}

}  // namespace adareg
