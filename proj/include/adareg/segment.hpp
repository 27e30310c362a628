// Convex-relaxed multi-label segmentation with adaptive weights and a
// mutual-exclusivity penalty.
//
// Each label i carries a relaxed indicator u_i >= 0 split as u_i = v_i with
// sum_i v_i = 1, a region intensity c_i, and its own weight field lambda_i:
//
//   sum_i  lambda_i huber(f - c_i, mu) u_i + (1 - lambda_i) huber(|grad v_i|, eta)
//        + tau_excl u_i sum_{j != i} u_j
//
// The final labeling is the per-pixel argmax of u_i.
#pragma once

#include <cstdint>
#include <vector>

#include "adareg/solver.hpp"

namespace adareg {

struct SegmentParams {
  SolverParams solver = segment_defaults();
  int n_labels = 2;
  double tau_excl = 0.5;
  std::uint64_t seed = 0;
  /// Use the previous iterate of every other label in the exclusivity term
  /// instead of the latest available one.
  bool jacobi_exclusivity = false;

  void validate() const;
};

struct LabelLayer {
  ScalarGrid u, v, w;
  ScalarGrid r;
  VectorGrid z;
  ScalarGrid lambda;
  double c = 0.0;
};

struct LabelState {
  std::vector<LabelLayer> layers;
  /// Number of c-updates skipped because the label had (almost) no mass.
  int degenerate_c_updates = 0;

  int n_labels() const { return static_cast<int>(layers.size()); }
};

/// Uniformly random initial labeling from the seed.
LabelState init_labels(const ScalarGrid& f, int n_labels, std::uint64_t seed);

/// Initial state from an explicit labeling; u_i = v_i = indicator of label i,
/// w = r = z = 0, c_i the mean of f over label i (global mean when empty).
LabelState init_labels_from(const ScalarGrid& f, const LabelMap& labels, int n_labels);

/// Weighted region mean sum lambda (f - r) u / sum lambda u. Returns the
/// previous c_i (and counts a degenerate update) when the denominator is
/// <= 1e-12.
double update_c(LabelState& state, const ScalarGrid& f, int i);

/// shrink(f - c_i, mu).
ScalarGrid update_r(const LabelLayer& layer, const ScalarGrid& f, double mu);

/// d_i = |r_i| + (f - c_i - r_i)^2 / (2 mu), the per-pixel data cost.
ScalarGrid data_cost(const LabelLayer& layer, const ScalarGrid& f, double mu);

/// u_i = max(0, v_i - w_i - (lambda_i/theta) d_i - (tau/theta) others), where
/// `others` is sum_{j != i} u_j.
ScalarGrid update_u(const LabelLayer& layer, const ScalarGrid& d, const ScalarGrid& others,
                    double tau_excl, double theta);

/// Screened solve per label followed by projection onto sum_i v_i = 1.
void update_v_all(LabelState& state, const SolverParams& params);

/// Per-pixel argmax of u_i; ties go to the smallest index.
LabelMap extract_labels(const LabelState& state);

double segment_energy(const LabelState& state, const ScalarGrid& f, const SegmentParams& params);

/// Mean over pixels of sum_{i != j} u_i u_j.
double mean_pairwise_overlap(const LabelState& state);

class SegmentProblem {
public:
  SegmentProblem(const ScalarGrid& f, const SegmentParams& params);
  SegmentProblem(const ScalarGrid& f, const SegmentParams& params, LabelState initial);

  /// One iteration: per label nu, lambda, c, r, z, u, v~; then the
  /// sum-to-one projection and the dual updates.
  void step();

  double energy() const { return segment_energy(state_, f_, params_); }
  double primal_residual() const;
  double mean_lambda() const;

  const LabelState& state() const { return state_; }

private:
  ScalarGrid f_;
  SegmentParams params_;
  LabelState state_;
};

struct SegmentResult {
  LabelMap labels;
  LabelState state;
  AdmmReport report;
};

SegmentResult run_segment(const ScalarGrid& f, const SegmentParams& params,
                          const std::function<void(int, const SegmentProblem&)>& observer = {});

SegmentResult run_segment(const ScalarGrid& f, const SegmentParams& params, LabelState initial,
                          const std::function<void(int, const SegmentProblem&)>& observer = {});

}  // namespace adareg
