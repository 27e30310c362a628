// Residual-driven weighting.
//
//     nu(x)     = exp(-(G_sigma * rho)(x) / beta)
//     lambda(x) = argmin_l 0.5 (nu - l)^2 + alpha |l| = max(nu - alpha, 0)
//
// lambda weighs the data term and (1 - lambda) the regularizer, so a poor
// local fit (large rho) shifts weight toward regularization.
#pragma once

#include <optional>

#include "adareg/grid.hpp"

namespace adareg {

struct AdaptiveParams {
  double beta = 1.0;
  double alpha = 0.01;
  double smoothing_sigma = 0.0;
  /// When set, lambda is this constant everywhere (classical fixed weight).
  std::optional<double> constant_lambda;

  bool adaptive() const { return !constant_lambda.has_value(); }

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct WeightFields {
  ScalarGrid lambda;
  ScalarGrid one_minus_lambda;
};

ScalarGrid residual_to_nu(const ScalarGrid& rho, const AdaptiveParams& params);

/// Lasso shrinkage of nu; in constant mode returns the constant field.
ScalarGrid nu_to_lambda(const ScalarGrid& nu, const AdaptiveParams& params);

WeightFields weight_fields(const ScalarGrid& rho, const AdaptiveParams& params);

}  // namespace adareg
