#include <doctest.h>

#include <cmath>
#include <random>

#include "adareg/metrics.hpp"
#include "adareg/segment.hpp"
#include "adareg/synth.hpp"
#include "support.hpp"

using namespace adareg;

TEST_CASE("region intensity is the weighted mean") {
  std::mt19937_64 rng(51);
  const ScalarGrid f = testing::random_grid(6, 5, rng, 0.0, 1.0);
  LabelState s = init_labels(f, 3, 4);
  auto& L = s.layers[1];
  L.u = testing::random_grid(6, 5, rng, 0.0, 1.0);
  L.lambda = testing::random_grid(6, 5, rng, 0.1, 0.9);
  L.r = testing::random_grid(6, 5, rng, -0.05, 0.05);
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    num += L.lambda[p] * (f[p] - L.r[p]) * L.u[p];
    den += L.lambda[p] * L.u[p];
  }
  CHECK(update_c(s, f, 1) == doctest::Approx(num / den).epsilon(1e-13));
  CHECK(s.degenerate_c_updates == 0);
}

TEST_CASE("an empty label keeps its intensity") {
  const ScalarGrid f(4, 4, 0.5);
  LabelState s = init_labels_from(f, LabelMap(4, 4, 0), 2);
  s.layers[1].c = 0.25;
  s.layers[1].lambda = ScalarGrid(4, 4, 0.5);
  CHECK(update_c(s, f, 1) == 0.25);
  CHECK(s.degenerate_c_updates == 1);
}

TEST_CASE("initialization from a labeling") {
  const ScalarGrid f(2, 1, std::vector<double>{0.2, 0.6});
  LabelMap labels(2, 1);
  labels[1] = 1;
  const LabelState s = init_labels_from(f, labels, 3);
  REQUIRE(s.n_labels() == 3);
  CHECK(s.layers[0].u[0] == 1.0);
  CHECK(s.layers[0].u[1] == 0.0);
  CHECK(s.layers[0].c == 0.2);
  CHECK(s.layers[1].c == 0.6);
  CHECK(s.layers[2].c == doctest::Approx(0.4));
  CHECK(extract_labels(s) == labels);
}

TEST_CASE("random initialization is reproducible and covers the labels") {
  std::mt19937_64 rng(52);
  const ScalarGrid f = testing::random_grid(32, 32, rng, 0.0, 1.0);
  const LabelMap a = extract_labels(init_labels(f, 4, 9));
  CHECK(a == extract_labels(init_labels(f, 4, 9)));
  CHECK_FALSE(a == extract_labels(init_labels(f, 4, 10)));
  CHECK(a.label_count() == 4);
  CHECK_THROWS_AS(init_labels(f, 1, 0), std::invalid_argument);
}

TEST_CASE("data cost and u-update formulas") {
  std::mt19937_64 rng(53);
  const ScalarGrid f = testing::random_grid(5, 4, rng, 0.0, 1.0);
  LabelLayer L;
  L.c = 0.4;
  L.r = update_r(L, f, 0.1);
  for (std::size_t p = 0; p < f.size(); ++p) CHECK(L.r[p] == shrink(f[p] - 0.4, 0.1));
  const ScalarGrid d = data_cost(L, f, 0.1);
  for (std::size_t p = 0; p < f.size(); ++p)
    CHECK(d[p] == doctest::Approx(huber(f[p] - 0.4, 0.1)).epsilon(1e-13));

  L.v = testing::random_grid(5, 4, rng, 0.0, 1.0);
  L.w = testing::random_grid(5, 4, rng, -0.2, 0.2);
  L.lambda = testing::random_grid(5, 4, rng, 0.0, 0.9);
  const ScalarGrid others = testing::random_grid(5, 4, rng, 0.0, 1.0);
  const ScalarGrid u = update_u(L, d, others, 0.5, 2.0);
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double t = L.v[p] - L.w[p] - L.lambda[p] / 2.0 * d[p] - 0.25 * others[p];
    CHECK(u[p] == doctest::Approx(std::max(0.0, t)).epsilon(1e-13));
  }
}

TEST_CASE("argmax ties go to the smallest label") {
  LabelState s = init_labels_from(ScalarGrid(2, 1), LabelMap(2, 1), 3);
  s.layers[0].u = ScalarGrid(2, 1, std::vector<double>{0.3, 0.2});
  s.layers[1].u = ScalarGrid(2, 1, std::vector<double>{0.5, 0.4});
  s.layers[2].u = ScalarGrid(2, 1, std::vector<double>{0.5, 0.4});
  const LabelMap m = extract_labels(s);
  CHECK(m[0] == 1);
  CHECK(m[1] == 1);
}

TEST_CASE("v stays on the simplex constraint and w tracks u - v") {
  const LabeledImage img = junction_image(4, 32, 0.15, 1, 0.05);
  SegmentParams p;
  p.n_labels = 3;
  p.solver.max_iters = 20;
  SegmentProblem prob(img.image, p);
  for (int it = 0; it < 20; ++it) {
    const LabelState before = prob.state();
    prob.step();
    const LabelState& s = prob.state();
    for (std::size_t px = 0; px < img.image.size(); ++px) {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        sum += s.layers[i].v[px];
        CHECK(s.layers[i].u[px] >= 0.0);
        CHECK(s.layers[i].w[px] == before.layers[i].w[px] + (s.layers[i].u[px] - s.layers[i].v[px]));
        CHECK(s.layers[i].lambda[px] >= 0.0);
        CHECK(s.layers[i].lambda[px] <= 0.99 + 1e-15);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("more labels than pixels still produces a labeling") {
  const ScalarGrid f(2, 2, std::vector<double>{0.1, 0.4, 0.6, 0.9});
  SegmentParams p;
  p.n_labels = 8;
  p.solver.max_iters = 10;
  const SegmentResult res = run_segment(f, p);
  for (int l : res.labels.values()) {
    CHECK(l >= 0);
    CHECK(l < 8);
  }
  for (const auto& L : res.state.layers) CHECK(std::isfinite(L.c));
}

TEST_CASE("label permutation commutes with the Jacobi scheme") {
  const LabeledImage img = two_region_image(32, 0.2, 0.8, 0.05, 3);
  SegmentParams p;
  p.jacobi_exclusivity = true;
  p.solver.max_iters = 15;
  p.solver.tol_primal = 1e-14;
  LabelMap init(32, 32), swapped(32, 32);
  SplitMix64 rng(7);
  for (std::size_t i = 0; i < init.size(); ++i) {
    init[i] = rng.uniform() < 0.5 ? 0 : 1;
    swapped[i] = 1 - init[i];
  }
  const SegmentResult a = run_segment(img.image, p, init_labels_from(img.image, init, 2));
  const SegmentResult b = run_segment(img.image, p, init_labels_from(img.image, swapped, 2));
  for (int i = 0; i < 2; ++i) {
    CHECK(a.state.layers[i].u == b.state.layers[1 - i].u);
    CHECK(a.state.layers[i].v == b.state.layers[1 - i].v);
    CHECK(a.state.layers[i].c == b.state.layers[1 - i].c);
  }
  for (std::size_t i = 0; i < a.labels.size(); ++i) CHECK(a.labels[i] == 1 - b.labels[i]);
}

TEST_CASE("exclusivity reduces overlap") {
  const LabeledImage img = junction_image(4, 48, 0.15, 2, 0.05);
  double overlap[2];
  for (int k = 0; k < 2; ++k) {
    SegmentParams p;
    p.n_labels = 3;
    p.tau_excl = k == 0 ? 0.0 : 0.5;
    p.seed = 3;
    p.solver.max_iters = 60;
    overlap[k] = mean_pairwise_overlap(run_segment(img.image, p).state);
  }
  CHECK(overlap[1] < overlap[0]);
}

TEST_CASE("overlap of a hard labeling is zero") {
  const LabeledImage img = junction_image(5, 32, 0.15, 1);
  const LabelState s = init_labels_from(img.image, img.labels, 5);
  CHECK(mean_pairwise_overlap(s) == 0.0);
}

TEST_CASE("a well separated image segments with constant weights and no exclusivity") {
  const LabeledImage img = two_region_image(48, 0.2, 0.8, 0.05, 4);
  SegmentParams p;
  p.tau_excl = 0.0;
  p.seed = 2;
  p.solver.max_iters = 150;
  const SegmentResult res = run_segment(img.image, p);
  CHECK(label_accuracy(res.labels, img.labels) >= 0.99);
}

TEST_CASE("parameter validation") {
  SegmentParams p;
  p.n_labels = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.tau_excl = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("label permutation permutes the output labeling in the default scheme") {
  const LabeledImage img = junction_image(4, 48, 0.15, 6, 0.05);
  const int perm[3] = {2, 0, 1};
  SegmentParams p;
  p.n_labels = 3;
  p.solver.max_iters = 100;
  const LabelState start = init_labels(img.image, 3, 11);
  const LabelMap init = extract_labels(start);
  LabelMap permuted(48, 48);
  for (std::size_t i = 0; i < init.size(); ++i) permuted[i] = perm[init[i]];
  const SegmentResult a = run_segment(img.image, p, init_labels_from(img.image, init, 3));
  const SegmentResult b = run_segment(img.image, p, init_labels_from(img.image, permuted, 3));
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) mismatched += b.labels[i] != perm[a.labels[i]];
  CHECK(mismatched == 0);
}
