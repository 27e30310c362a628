// Adaptive Huber-Huber optical flow with warping annealing.
//
// Brightness model f2(x) = f1(x + u(x)). With a mixing parameter tau the
// images are warped symmetrically around the current prior u0,
//
//     F1 = f1(x + tau u0),  F2 = f2(x - (1 - tau) u0),
//     ft = F2 - F1,         A  = (1 - tau) grad F2 + tau grad F1,
//
// and the linearized data residual is ft - A . (u - u0). tau starts at tau0
// and grows by dtau per inner iteration until it reaches 1.
#pragma once

#include "adareg/solver.hpp"

namespace adareg {

struct FlowParams {
  SolverParams solver = flow_defaults();
  double tau0 = 0.5;
  double dtau = 0.005;
  int n_warps = 10;
  int pyramid_levels = 1;
  /// Per-partial-derivative shrinkage of each flow component; off selects
  /// the isotropic (Euclidean) form.
  bool anisotropic_reg = true;
  /// Use A = grad F1 + tau grad F2 instead of the symmetric mix.
  bool appendix_gradient = false;

  void validate() const;
};

/// tau after k inner iterations: min(1, tau0 + k dtau), exactly 1 from
/// ceil((1 - tau0) / dtau) on.
double tau_schedule(double tau0, double dtau, long k);

struct FlowState {
  VectorGrid u, v, w;
  ScalarGrid r;
  VectorGrid z1, z2;  // gradient auxiliaries of u_1 and u_2
  ScalarGrid lambda;
  double tau = 0.5;
  VectorGrid A;
  ScalarGrid ft;
  VectorGrid u0;  // linearization point
};

struct Linearization {
  VectorGrid A;
  ScalarGrid ft;
};

Linearization linearize(const ScalarGrid& f1, const ScalarGrid& f2, const VectorGrid& u0,
                        double tau, bool appendix_gradient = false);

/// ft - A . (u - u0) pointwise.
ScalarGrid flow_data_residual(const FlowState& s);

/// |r| + (ft - A.(u - u0) - r)^2 / (2 mu) with the stored r.
ScalarGrid flow_envelope_residual(const FlowState& s, double mu);

/// shrink(ft - A . (u - u0), mu).
ScalarGrid update_r(const FlowState& s, double mu);

/// Solution of (s I + lambda A A^T) u = b for s > 0, lambda >= 0, by the
/// rank-one (Sherman-Morrison) closed form.
Vec2 solve_flow_pixel(const Vec2& A, double lambda, double s, const Vec2& b);

/// Per-pixel solve of
///   (mu theta I + lambda A A^T) u = mu theta (v - w) + lambda (ft + A.u0 - r) A.
VectorGrid update_u(const FlowState& s, const SolverParams& params);

/// z_i from grad v_i, screened solve for each v_i, then w += u - v.
void update_v_w(FlowState& s, const SolverParams& params, bool anisotropic_reg);

double flow_energy(const FlowState& s, const SolverParams& params, bool anisotropic_reg);

class FlowProblem {
public:
  /// Starts from u = v = u0 = initial (zero when empty).
  FlowProblem(const ScalarGrid& f1, const ScalarGrid& f2, const FlowParams& params,
              VectorGrid initial = {}, long tau_counter = 0);

  /// Re-centers the linearization at the current u.
  void begin_warp();

  /// One inner iteration: linearize at the current tau, then nu, lambda, r,
  /// z, u, v, w; finally advance tau.
  void step();

  double energy() const { return flow_energy(state_, params_.solver, params_.anisotropic_reg); }
  double primal_residual() const;
  double mean_lambda() const { return mean(state_.lambda); }

  const FlowState& state() const { return state_; }
  long tau_counter() const { return tau_counter_; }

private:
  ScalarGrid f1_, f2_;
  FlowParams params_;
  FlowState state_;
  long tau_counter_;
};

struct FlowResult {
  VectorGrid u;
  ScalarGrid lambda;
  AdmmReport report;  // iteration numbers run across warps and levels
};

FlowResult run_flow(const ScalarGrid& f1, const ScalarGrid& f2, const FlowParams& params,
                    const std::function<void(int, const FlowProblem&)>& observer = {});

/// 2x2 block average; odd trailing rows/columns are averaged with fewer
/// samples.
ScalarGrid downsample_half(const ScalarGrid& f);

/// Bilinear resampling of a flow field to width x height, with the vectors
/// scaled by the size ratio.
VectorGrid upsample_flow(const VectorGrid& u, int width, int height);

}  // namespace adareg
