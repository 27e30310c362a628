#include <doctest.h>

#include <cmath>
#include <random>

#include "adareg/adaptive.hpp"
#include "support.hpp"

using namespace adareg;

TEST_CASE("nu and lambda follow the closed form") {
  const ScalarGrid rho(4, 1, std::vector<double>{0.0, 0.5, 2.0, 50.0});
  AdaptiveParams p;
  p.beta = 2.0;
  p.alpha = 0.1;
  const ScalarGrid nu = residual_to_nu(rho, p);
  const ScalarGrid lambda = nu_to_lambda(nu, p);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(nu[i] == doctest::Approx(std::exp(-rho[i] / 2.0)).epsilon(1e-15));
    CHECK(lambda[i] == doctest::Approx(std::max(nu[i] - 0.1, 0.0)).epsilon(1e-15));
  }
  CHECK(lambda[3] == 0.0);
  CHECK(lambda[0] == doctest::Approx(0.9));
}

TEST_CASE("lambda stays in [0, 1 - alpha]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> da(0.0, 0.9), db(0.05, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    AdaptiveParams p;
    p.alpha = da(rng);
    p.beta = db(rng);
    p.smoothing_sigma = trial % 3;
    const ScalarGrid rho = testing::random_grid(12, 9, rng, 0.0, 5.0);
    const WeightFields w = weight_fields(rho, p);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      CHECK(w.lambda[i] >= 0.0);
      CHECK(w.lambda[i] <= 1.0 - p.alpha + 1e-15);
      CHECK(w.one_minus_lambda[i] == 1.0 - w.lambda[i]);
    }
  }
}

TEST_CASE("smoothing is applied to the residual before the exponential") {
  std::mt19937_64 rng(22);
  const ScalarGrid rho = testing::random_grid(15, 15, rng, 0.0, 1.0);
  AdaptiveParams p;
  p.smoothing_sigma = 1.5;
  const ScalarGrid nu = residual_to_nu(rho, p);
  const ScalarGrid smoothed = convolve_gaussian(rho, 1.5);
  for (std::size_t i = 0; i < rho.size(); ++i)
    CHECK(nu[i] == doctest::Approx(std::exp(-smoothed[i])).epsilon(1e-14));
}

TEST_CASE("constant mode ignores the residual") {
  std::mt19937_64 rng(23);
  AdaptiveParams p;
  p.constant_lambda = 0.3;
  CHECK_FALSE(p.adaptive());
  const WeightFields w = weight_fields(testing::random_grid(6, 6, rng, 0.0, 3.0), p);
  for (double v : w.lambda.values()) CHECK(v == 0.3);
  for (double v : w.one_minus_lambda.values()) CHECK(v == doctest::Approx(0.7));
}

TEST_CASE("validation") {
  AdaptiveParams p;
  CHECK_NOTHROW(p.validate());
  p.beta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.alpha = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.constant_lambda = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  ScalarGrid rho(2, 2, 1.0);
  rho[3] = -0.1;
  CHECK_THROWS_AS(residual_to_nu(rho, p), std::invalid_argument);
}

TEST_CASE("larger residuals never give larger weights without smoothing") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  AdaptiveParams p;
  p.alpha = 0.2;
  p.beta = 0.7;
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarGrid a = testing::random_grid(10, 10, rng, 0.0, 3.0);
    ScalarGrid b = a;
    for (double& v : b.values()) v += bump(rng);
    const ScalarGrid la = weight_fields(a, p).lambda, lb = weight_fields(b, p).lambda;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(la[i] >= lb[i]);
  }
}

TEST_CASE("edge values of the weight map") {
  AdaptiveParams p;
  p.alpha = 0.01;
  const WeightFields zero = weight_fields(ScalarGrid(3, 3), p);
  for (double v : zero.lambda.values()) CHECK(v == doctest::Approx(0.99).epsilon(1e-15));
  const WeightFields large = weight_fields(ScalarGrid(3, 3, 1e3), p);
  for (double v : large.lambda.values()) CHECK(v == 0.0);
  for (double v : large.one_minus_lambda.values()) CHECK(v == 1.0);
}
