#include "adareg/adaptive.hpp"

#include <cmath>
#include <stdexcept>

#include "adareg/parallel.hpp"
#include "adareg/prox.hpp"

namespace adareg {

void AdaptiveParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(smoothing_sigma >= 0.0))
    throw std::invalid_argument("smoothing sigma must be nonnegative");
  if (constant_lambda && !(*constant_lambda >= 0.0 && *constant_lambda <= 1.0))
    throw std::invalid_argument("constant lambda must lie in [0,1]");
}

ScalarGrid residual_to_nu(const ScalarGrid& rho, const AdaptiveParams& params) {
  for (double r : rho.values())
    if (!(r >= 0.0)) throw std::invalid_argument("residual must be nonnegative");
  ScalarGrid nu = convolve_gaussian(rho, params.smoothing_sigma);
  const int w = nu.width();
  parallel_rows(nu.height(), [&](int y) {
    for (int x = 0; x < w; ++x) nu(x, y) = std::exp(-nu(x, y) / params.beta);
  });
  return nu;
}

ScalarGrid nu_to_lambda(const ScalarGrid& nu, const AdaptiveParams& params) {
  if (params.constant_lambda) return ScalarGrid(nu.width(), nu.height(), *params.constant_lambda);
  ScalarGrid lambda = nu;
  for (double& v : lambda.values()) v = shrink(v, params.alpha);
  return lambda;
}

WeightFields weight_fields(const ScalarGrid& rho, const AdaptiveParams& params) {
  ScalarGrid lambda = params.constant_lambda
                          ? ScalarGrid(rho.width(), rho.height(), *params.constant_lambda)
                          : nu_to_lambda(residual_to_nu(rho, params), params);
  ScalarGrid rest = lambda;
  for (double& v : rest.values()) v = 1.0 - v;
  return {std::move(lambda), std::move(rest)};
}

}  // namespace adareg
