// Huber loss, soft shrinkage and the projections used by the constrained
// updates. The Huber loss is the Moreau envelope of |.|,
//
//     huber(x, mu) = min_r |r| + (x - r)^2 / (2 mu),
//
// and shrink(x, mu) is the minimizer, which is what lets every solver replace
// a Huber term by an auxiliary variable with a closed-form update.
#pragma once

#include <vector>

#include "adareg/grid.hpp"

namespace adareg {

/// Positive threshold of a Huber term (mu for data, eta for regularity).
class HuberThreshold {
public:
  explicit HuberThreshold(double value);
  double value() const { return value_; }
  operator double() const { return value_; }

private:
  double value_;
};

double huber(double x, double mu);

/// Huber of the Euclidean norm (isotropic).
double huber_vec(const Vec2& v, double mu);

/// Sum of per-component Huber values (anisotropic).
double huber_aniso(const Vec2& v, double mu);

double shrink(double x, double t);

/// Isotropic shrinkage: v * max(0, 1 - t/|v|).
Vec2 shrink_vec(const Vec2& v, double t);

/// Componentwise scalar shrinkage.
Vec2 shrink_aniso(const Vec2& v, double t);

struct EnvelopeSample {
  double value;
  double argmin;
};

/// Brute-force minimization of |r| + (x - r)^2 / (2 mu) over an r-lattice of
/// spacing grid_step covering [-|x| - mu, |x| + mu]. Test oracle for huber()
/// and shrink().
EnvelopeSample moreau_envelope_bruteforce(double x, double mu, double grid_step);

ScalarGrid project_nonneg(const ScalarGrid& u);

/// Euclidean projection of a label stack onto {sum_i v_i(x) = 1}.
std::vector<ScalarGrid> project_sum_to_one(std::vector<ScalarGrid> stack);

}  // namespace adareg
