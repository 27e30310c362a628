#include "adareg/segment.hpp"

#include <cmath>

#include "adareg/parallel.hpp"
#include "adareg/synth.hpp"

namespace adareg {

void SegmentParams::validate() const {
  solver.validate();
  if (n_labels < 2) throw std::invalid_argument("n_labels must be at least 2");
  if (!(tau_excl >= 0.0)) throw std::invalid_argument("tau_excl must be nonnegative");
}

LabelState init_labels(const ScalarGrid& f, int n_labels, std::uint64_t seed) {
  if (n_labels < 2) throw std::invalid_argument("n_labels must be at least 2");
  LabelMap labels(f.width(), f.height());
  SplitMix64 rng(seed);
  for (int& l : labels.values())
    l = std::min(static_cast<int>((1.0 - rng.uniform()) * n_labels), n_labels - 1);
  return init_labels_from(f, labels, n_labels);
}

LabelState init_labels_from(const ScalarGrid& f, const LabelMap& labels, int n_labels) {
  require_same_shape(f, labels, "init_labels");
  const int w = f.width(), h = f.height();
  const double global_mean = mean(f);
  LabelState s;
  s.layers.resize(static_cast<std::size_t>(n_labels));
  for (int i = 0; i < n_labels; ++i) {
    auto& L = s.layers[static_cast<std::size_t>(i)];
    L.u = ScalarGrid(w, h);
    double sum = 0.0;
    long count = 0;
    for (std::size_t p = 0; p < f.size(); ++p)
      if (labels[p] == i) {
        L.u[p] = 1.0;
        sum += f[p];
        ++count;
      }
    L.v = L.u;
    L.w = ScalarGrid(w, h);
    L.r = ScalarGrid(w, h);
    L.z = VectorGrid(w, h);
    L.lambda = ScalarGrid(w, h);
    L.c = count > 0 ? sum / static_cast<double>(count) : global_mean;
  }
  return s;
}

double update_c(LabelState& state, const ScalarGrid& f, int i) {
  auto& L = state.layers[static_cast<std::size_t>(i)];
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double wgt = L.lambda[p] * L.u[p];
    num += wgt * (f[p] - L.r[p]);
    den += wgt;
  }
  if (den <= 1e-12) {
    ++state.degenerate_c_updates;
    return L.c;
  }
  return num / den;
}

ScalarGrid update_r(const LabelLayer& layer, const ScalarGrid& f, double mu) {
  ScalarGrid r(f.width(), f.height());
  for (std::size_t p = 0; p < r.size(); ++p) r[p] = shrink(f[p] - layer.c, mu);
  return r;
}

ScalarGrid data_cost(const LabelLayer& layer, const ScalarGrid& f, double mu) {
  ScalarGrid d(f.width(), f.height());
  for (std::size_t p = 0; p < d.size(); ++p) {
    const double e = f[p] - layer.c - layer.r[p];
    d[p] = std::abs(layer.r[p]) + e * e / (2.0 * mu);
  }
  return d;
}

ScalarGrid update_u(const LabelLayer& layer, const ScalarGrid& d, const ScalarGrid& others,
                    double tau_excl, double theta) {
  ScalarGrid u(d.width(), d.height());
  const int w = u.width();
  parallel_rows(u.height(), [&](int y) {
    for (int x = 0; x < w; ++x) {
      const double t = layer.v(x, y) - layer.w(x, y) - layer.lambda(x, y) / theta * d(x, y) -
                       tau_excl / theta * others(x, y);
      u(x, y) = std::max(0.0, t);
    }
  });
  return u;
}

void update_v_all(LabelState& state, const SolverParams& params) {
  std::vector<ScalarGrid> tilde;
  tilde.reserve(state.layers.size());
  for (auto& L : state.layers) {
    const ScalarGrid xi = screening_weight(L.lambda, params.eta, params.theta);
    const ScalarGrid rhs = screened_rhs(L.u, L.w, xi, L.z);
    ScalarGrid v = L.v;
    solve_screened(v, rhs, xi, params.gs_sweeps);
    tilde.push_back(std::move(v));
  }
  tilde = project_sum_to_one(std::move(tilde));
  for (std::size_t i = 0; i < state.layers.size(); ++i) state.layers[i].v = std::move(tilde[i]);
}

LabelMap extract_labels(const LabelState& state) {
  const auto& first = state.layers.front().u;
  LabelMap out(first.width(), first.height());
  for (std::size_t p = 0; p < first.size(); ++p) {
    int best = 0;
    double best_val = state.layers[0].u[p];
    for (std::size_t i = 1; i < state.layers.size(); ++i)
      if (state.layers[i].u[p] > best_val) {
        best_val = state.layers[i].u[p];
        best = static_cast<int>(i);
      }
    out[p] = best;
  }
  return out;
}

namespace {

ScalarGrid sum_of_u(const LabelState& s) {
  ScalarGrid total(s.layers.front().u.width(), s.layers.front().u.height());
  for (const auto& L : s.layers)
    for (std::size_t p = 0; p < total.size(); ++p) total[p] += L.u[p];
  return total;
}

ScalarGrid others_of(const LabelState& s, int i) {
  ScalarGrid o(s.layers.front().u.width(), s.layers.front().u.height());
  for (int j = 0; j < s.n_labels(); ++j) {
    if (j == i) continue;
    const auto& u = s.layers[static_cast<std::size_t>(j)].u;
    for (std::size_t p = 0; p < o.size(); ++p) o[p] += u[p];
  }
  return o;
}

}  // namespace

double segment_energy(const LabelState& s, const ScalarGrid& f, const SegmentParams& params) {
  const double mu = params.solver.mu, eta = params.solver.eta;
  const ScalarGrid total = sum_of_u(s);
  double e = 0.0;
  for (const auto& L : s.layers) {
    const VectorGrid g = gradient(L.u);
    for (std::size_t p = 0; p < f.size(); ++p) {
      e += L.lambda[p] * huber(f[p] - L.c, mu) * L.u[p] +
           (1.0 - L.lambda[p]) * huber_vec(g[p], eta) +
           params.tau_excl * L.u[p] * (total[p] - L.u[p]);
    }
  }
  return e;
}

double mean_pairwise_overlap(const LabelState& s) {
  const ScalarGrid total = sum_of_u(s);
  double acc = 0.0;
  for (const auto& L : s.layers)
    for (std::size_t p = 0; p < total.size(); ++p) acc += L.u[p] * (total[p] - L.u[p]);
  return acc / static_cast<double>(total.size());
}

SegmentProblem::SegmentProblem(const ScalarGrid& f, const SegmentParams& params)
    : SegmentProblem(f, params, init_labels(f, params.n_labels, params.seed)) {}

SegmentProblem::SegmentProblem(const ScalarGrid& f, const SegmentParams& params,
                               LabelState initial)
    : f_(f), params_(params), state_(std::move(initial)) {
  params_.validate();
  if (state_.n_labels() != params_.n_labels)
    throw std::invalid_argument("initial state has the wrong number of labels");
  for (const auto& L : state_.layers) require_same_shape(f_, L.u, "segment");
}

void SegmentProblem::step() {
  const SolverParams& sp = params_.solver;
  std::vector<ScalarGrid> previous_u;
  if (params_.jacobi_exclusivity)
    for (const auto& L : state_.layers) previous_u.push_back(L.u);

  for (int i = 0; i < state_.n_labels(); ++i) {
    auto& L = state_.layers[static_cast<std::size_t>(i)];

    // Weight from the previous iterate: rho_i = d_i(c^k, r^k) * u_i^k.
    ScalarGrid rho = data_cost(L, f_, sp.mu);
    for (std::size_t p = 0; p < rho.size(); ++p) rho[p] *= L.u[p];
    L.lambda = weight_fields(rho, sp.adaptive).lambda;

    L.c = update_c(state_, f_, i);
    L.r = update_r(L, f_, sp.mu);
    const VectorGrid gv = gradient(L.v);
    for (std::size_t p = 0; p < gv.size(); ++p) L.z[p] = shrink_vec(gv[p], sp.eta);

    ScalarGrid others(f_.width(), f_.height());
    if (params_.jacobi_exclusivity) {
      for (int j = 0; j < state_.n_labels(); ++j)
        if (j != i)
          for (std::size_t p = 0; p < others.size(); ++p)
            others[p] += previous_u[static_cast<std::size_t>(j)][p];
    } else {
      others = others_of(state_, i);
    }
    L.u = update_u(L, data_cost(L, f_, sp.mu), others, params_.tau_excl, sp.theta);
  }

  update_v_all(state_, sp);
  for (auto& L : state_.layers)
    for (std::size_t p = 0; p < L.w.size(); ++p) L.w[p] += L.u[p] - L.v[p];
}

double SegmentProblem::primal_residual() const {
  double acc = 0.0;
  for (const auto& L : state_.layers)
    for (std::size_t p = 0; p < L.u.size(); ++p) {
      const double d = L.u[p] - L.v[p];
      acc += d * d;
    }
  return std::sqrt(acc / static_cast<double>(f_.size()));
}

double SegmentProblem::mean_lambda() const {
  double acc = 0.0;
  for (const auto& L : state_.layers) acc += mean(L.lambda);
  return acc / state_.n_labels();
}

SegmentResult run_segment(const ScalarGrid& f, const SegmentParams& params,
                          const std::function<void(int, const SegmentProblem&)>& observer) {
  return run_segment(f, params, init_labels(f, params.n_labels, params.seed), observer);
}

SegmentResult run_segment(const ScalarGrid& f, const SegmentParams& params, LabelState initial,
                          const std::function<void(int, const SegmentProblem&)>& observer) {
  SegmentProblem problem(f, params, std::move(initial));
  AdmmReport report = run_admm(problem, params.solver, observer);
  return {extract_labels(problem.state()), problem.state(), std::move(report)};
}

}  // namespace adareg
