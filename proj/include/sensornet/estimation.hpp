#pragma once

#include "sensornet/field_model.hpp"
#include "sensornet/lp.hpp"
#include "sensornet/types.hpp"

namespace sensornet {

// One instance of the three optimization problems: the d x k gradient matrix
// of the field at the working point, and alpha, the gradient of the target
// function q there.
struct EstimationProblem {
  Matrix gradient;  // G, d x k
  Vector alpha;     // nonzero k-vector

  EstimationProblem(Matrix g, Vector a);
  EstimationProblem(const GradientMatrix& g, Vector a)
      : EstimationProblem(g.entries, std::move(a)) {}

  int sensor_count() const { return static_cast<int>(gradient.rows()); }
  int param_dim() const { return static_cast<int>(gradient.cols()); }
};

// max_beta 1 / |G beta|_1 subject to alpha . beta = 1. The squared reciprocal
// of the optimum divided by t^2 is the saturable MSE floor.
struct BoundSolution {
  double u = 0.0;  // max 1/|G beta|_1
  Vector beta0;    // maximizer, alpha . beta0 = 1
};

// min_w |w|_inf subject to G^T w = alpha; the optimal measurement weights.
struct WeightSolution {
  double u_prime = 0.0;
  Vector w0;
};

// max_v alpha . v subject to |G v|_1 <= 1; equals u' by strong duality.
struct DualSolution {
  double u_dprime = 0.0;
  Vector v0;
};

BoundSolution solve_bound(const EstimationProblem& p);
WeightSolution solve_protocol(const EstimationProblem& p);
DualSolution solve_dual(const EstimationProblem& p);

// Minimum-Euclidean-norm weights for the no-entanglement baseline. Returns
// the weight vector and its squared 2-norm (the MSE coefficient).
struct UnentangledSolution {
  Vector w;
  double mse_coeff = 0.0;
};
UnentangledSolution unentangled_weights(const EstimationProblem& p);

// True iff alpha lies in the row space of G, i.e. the consistency condition
// G^T w = alpha has a solution and q is estimable at this point.
bool check_identifiability(const Matrix& gradient, const Vector& alpha);

// Full column rank of G: every parameter is individually estimable.
bool has_full_rank(const Matrix& gradient);

// u^2 / t^2
double mse_lower_bound(double u, double t);

// An optimum of min |G beta|_1 at or below this is treated as "the bound is
// infinite": some beta with alpha . beta = 1 lies in the null space of G.
inline constexpr double kNullOptimumTol = 1e-12;

}  // namespace sensornet
