#include "adareg/flow.hpp"

#include <algorithm>
#include <cmath>

#include "adareg/parallel.hpp"

namespace adareg {

void FlowParams::validate() const {
  solver.validate();
  if (!(tau0 >= 0.0 && tau0 <= 1.0)) throw std::invalid_argument("tau0 must lie in [0, 1]");
  if (!(dtau >= 0.0)) throw std::invalid_argument("dtau must be nonnegative");
  if (n_warps < 1) throw std::invalid_argument("n_warps must be positive");
  if (pyramid_levels < 1) throw std::invalid_argument("pyramid_levels must be at least 1");
}

double tau_schedule(double tau0, double dtau, long k) {
  if (tau0 >= 1.0) return 1.0;
  if (dtau <= 0.0) return tau0;
  const auto steps = static_cast<long>(std::ceil((1.0 - tau0) / dtau - 1e-9));
  if (k >= steps) return 1.0;
  return std::min(1.0, tau0 + static_cast<double>(k) * dtau);
}

Linearization linearize(const ScalarGrid& f1, const ScalarGrid& f2, const VectorGrid& u0,
                        double tau, bool appendix_gradient) {
  require_same_shape(f1, f2, "linearize");
  require_same_shape(f1, u0, "linearize");
  const ScalarGrid w1 = warp_bilinear(f1, u0, tau);
  const ScalarGrid w2 = warp_bilinear(f2, u0, -(1.0 - tau));
  const VectorGrid g1 = central_gradient(w1);
  const VectorGrid g2 = central_gradient(w2);
  Linearization lin{VectorGrid(f1.width(), f1.height()), ScalarGrid(f1.width(), f1.height())};
  for (std::size_t i = 0; i < lin.ft.size(); ++i) {
    lin.ft[i] = w2[i] - w1[i];
    for (std::size_t c = 0; c < 2; ++c)
      lin.A[i][c] = appendix_gradient ? g1[i][c] + tau * g2[i][c]
                                      : (1.0 - tau) * g2[i][c] + tau * g1[i][c];
  }
  return lin;
}

namespace {

double pixel_residual(const FlowState& s, std::size_t i) {
  const Vec2& a = s.A[i];
  return s.ft[i] - (a[0] * (s.u[i][0] - s.u0[i][0]) + a[1] * (s.u[i][1] - s.u0[i][1]));
}

}  // namespace

ScalarGrid flow_data_residual(const FlowState& s) {
  ScalarGrid out(s.ft.width(), s.ft.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pixel_residual(s, i);
  return out;
}

ScalarGrid flow_envelope_residual(const FlowState& s, double mu) {
  ScalarGrid out(s.ft.width(), s.ft.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double e = pixel_residual(s, i) - s.r[i];
    out[i] = std::abs(s.r[i]) + e * e / (2.0 * mu);
  }
  return out;
}

ScalarGrid update_r(const FlowState& s, double mu) {
  ScalarGrid out(s.ft.width(), s.ft.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = shrink(pixel_residual(s, i), mu);
  return out;
}

Vec2 solve_flow_pixel(const Vec2& A, double lambda, double s, const Vec2& b) {
  const double ab = A[0] * b[0] + A[1] * b[1];
  const double aa = A[0] * A[0] + A[1] * A[1];
  const double k = lambda * ab / (s * (s + lambda * aa));
  return {b[0] / s - k * A[0], b[1] / s - k * A[1]};
}

VectorGrid update_u(const FlowState& s, const SolverParams& params) {
  const double mt = params.mu * params.theta;
  VectorGrid u(s.u.width(), s.u.height());
  const int w = u.width();
  parallel_rows(u.height(), [&](int y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                            static_cast<std::size_t>(x);
      const Vec2& a = s.A[i];
      const double l = s.lambda[i];
      const double data = s.ft[i] + a[0] * s.u0[i][0] + a[1] * s.u0[i][1] - s.r[i];
      const Vec2 b{mt * (s.v[i][0] - s.w[i][0]) + l * data * a[0],
                   mt * (s.v[i][1] - s.w[i][1]) + l * data * a[1]};
      u[i] = solve_flow_pixel(a, l, mt, b);
    }
  });
  return u;
}

void update_v_w(FlowState& s, const SolverParams& params, bool anisotropic_reg) {
  const ScalarGrid xi = screening_weight(s.lambda, params.eta, params.theta);
  for (int c = 0; c < 2; ++c) {
    ScalarGrid v = s.v.component(c);
    VectorGrid& z = c == 0 ? s.z1 : s.z2;
    const VectorGrid gv = gradient(v);
    for (std::size_t i = 0; i < gv.size(); ++i)
      z[i] = anisotropic_reg ? shrink_aniso(gv[i], params.eta) : shrink_vec(gv[i], params.eta);
    const ScalarGrid rhs = screened_rhs(s.u.component(c), s.w.component(c), xi, z);
    solve_screened(v, rhs, xi, params.gs_sweeps);
    s.v.set_component(c, v);
  }
  for (std::size_t i = 0; i < s.w.size(); ++i)
    for (std::size_t c = 0; c < 2; ++c) s.w[i][c] += s.u[i][c] - s.v[i][c];
}

double flow_energy(const FlowState& s, const SolverParams& params, bool anisotropic_reg) {
  const VectorGrid g1 = gradient(s.u.component(0));
  const VectorGrid g2 = gradient(s.u.component(1));
  double e = 0.0;
  for (std::size_t i = 0; i < s.ft.size(); ++i) {
    const double l = s.lambda[i];
    const double reg = anisotropic_reg
                           ? huber_aniso(g1[i], params.eta) + huber_aniso(g2[i], params.eta)
                           : huber_vec(g1[i], params.eta) + huber_vec(g2[i], params.eta);
    e += l * huber(pixel_residual(s, i), params.mu) + (1.0 - l) * reg;
  }
  return e;
}

FlowProblem::FlowProblem(const ScalarGrid& f1, const ScalarGrid& f2, const FlowParams& params,
                         VectorGrid initial, long tau_counter)
    : f1_(f1), f2_(f2), params_(params), tau_counter_(tau_counter) {
  params_.validate();
  require_same_shape(f1_, f2_, "flow");
  const int w = f1.width(), h = f1.height();
  if (initial.size() == 0) initial = VectorGrid(w, h);
  require_same_shape(f1_, initial, "flow initial");
  state_.u = initial;
  state_.v = initial;
  state_.u0 = initial;
  state_.w = VectorGrid(w, h);
  state_.r = ScalarGrid(w, h);
  state_.z1 = VectorGrid(w, h);
  state_.z2 = VectorGrid(w, h);
  state_.tau = tau_schedule(params_.tau0, params_.dtau, tau_counter_);
  Linearization lin = linearize(f1_, f2_, state_.u0, state_.tau, params_.appendix_gradient);
  state_.A = std::move(lin.A);
  state_.ft = std::move(lin.ft);
  state_.lambda = ScalarGrid(w, h);
}

void FlowProblem::begin_warp() { state_.u0 = state_.u; }

void FlowProblem::step() {
  auto& s = state_;
  const SolverParams& sp = params_.solver;
  s.tau = tau_schedule(params_.tau0, params_.dtau, tau_counter_);
  Linearization lin = linearize(f1_, f2_, s.u0, s.tau, params_.appendix_gradient);
  s.A = std::move(lin.A);
  s.ft = std::move(lin.ft);

  s.lambda = weight_fields(flow_envelope_residual(s, sp.mu), sp.adaptive).lambda;
  s.r = update_r(s, sp.mu);
  s.u = update_u(s, sp);
  update_v_w(s, sp, params_.anisotropic_reg);
  ++tau_counter_;
}

double FlowProblem::primal_residual() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < state_.u.size(); ++i)
    for (std::size_t c = 0; c < 2; ++c) {
      const double d = state_.u[i][c] - state_.v[i][c];
      acc += d * d;
    }
  return std::sqrt(acc / static_cast<double>(state_.u.size()));
}

ScalarGrid downsample_half(const ScalarGrid& f) {
  const int w = (f.width() + 1) / 2, h = (f.height() + 1) / 2;
  ScalarGrid out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx, sy = 2 * y + dy;
          if (sx < f.width() && sy < f.height()) acc += f(sx, sy), ++n;
        }
      out(x, y) = acc / n;
    }
  return out;
}

VectorGrid upsample_flow(const VectorGrid& u, int width, int height) {
  const double sx = static_cast<double>(width) / u.width();
  const double sy = static_cast<double>(height) / u.height();
  const ScalarGrid c0 = u.component(0), c1 = u.component(1);
  VectorGrid out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double px = (x + 0.5) / sx - 0.5, py = (y + 0.5) / sy - 0.5;
      out(x, y) = {sx * sample_bilinear(c0, px, py), sy * sample_bilinear(c1, px, py)};
    }
  return out;
}

FlowResult run_flow(const ScalarGrid& f1, const ScalarGrid& f2, const FlowParams& params,
                    const std::function<void(int, const FlowProblem&)>& observer) {
  params.validate();
  require_same_shape(f1, f2, "flow");

  std::vector<std::pair<ScalarGrid, ScalarGrid>> levels{{f1, f2}};
  for (int l = 1; l < params.pyramid_levels; ++l) {
    const auto& [a, b] = levels.back();
    if (a.width() < 8 || a.height() < 8) break;
    levels.emplace_back(downsample_half(a), downsample_half(b));
  }

  FlowResult result;
  VectorGrid u;
  int offset = 0;
  for (auto level = levels.rbegin(); level != levels.rend(); ++level) {
    const auto& [a, b] = *level;
    if (u.size() != 0) u = upsample_flow(u, a.width(), a.height());
    FlowProblem problem(a, b, params, u);
    for (int warp = 0; warp < params.n_warps; ++warp) {
      if (warp > 0) problem.begin_warp();
      std::function<void(int, const FlowProblem&)> inner;
      if (observer)
        inner = [&](int it, const FlowProblem& p) { observer(offset + it, p); };
      AdmmReport rep = run_admm(problem, params.solver, inner);
      for (auto rec : rep.history) {
        rec.iter += offset;
        result.report.history.push_back(rec);
      }
      offset += rep.iterations;
      result.report.converged = rep.converged;
    }
    u = problem.state().u;
    result.lambda = problem.state().lambda;
  }
  result.report.iterations = offset;
  result.u = std::move(u);
  return result;
}

}  // namespace adareg
