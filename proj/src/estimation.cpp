#include "sensornet/estimation.hpp"

#include <cmath>
#include <utility>

namespace sensornet {

EstimationProblem::EstimationProblem(Matrix g, Vector a)
    : gradient(std::move(g)), alpha(std::move(a)) {
  if (gradient.rows() < 1 || gradient.cols() < 1)
    throw DimensionError("gradient matrix must be at least 1x1");
  if (alpha.size() != gradient.cols())
    throw DimensionError("alpha length does not match parameter count");
  if (!gradient.allFinite() || !alpha.allFinite())
    throw DimensionError("estimation problem has non-finite data");
  if (alpha.cwiseAbs().maxCoeff() == 0.0)
    throw DimensionError("alpha must be nonzero");
}

BoundSolution solve_bound(const EstimationProblem& p) {
  const int d = p.sensor_count();
  const int k = p.param_dim();

  // minimize |G beta|_1 = minimize sum s_i with s_i >= +-(G beta)_i,
  // subject to alpha . beta = 1. Variables: s >= 0 first, then beta (free);
  // this ordering makes the deterministic pivot rule land on the vertex with
  // the sparsest beta when the optimal face is degenerate.
  LinearProgram lp = LinearProgram::make(d + k, 1 + 2 * d);
  for (int j = 0; j < k; ++j) lp.set_free(d + j);
  for (int i = 0; i < d; ++i) lp.objective(i) = -1.0;  // maximize -sum s
  lp.constraint_matrix.block(0, d, 1, k) = p.alpha.transpose();
  lp.rhs(0) = 1.0;
  lp.relations[0] = Relation::Equal;
  for (int i = 0; i < d; ++i) {
    lp.constraint_matrix.block(1 + 2 * i, d, 1, k) = p.gradient.row(i);
    lp.constraint_matrix(1 + 2 * i, i) = -1.0;
    lp.constraint_matrix.block(2 + 2 * i, d, 1, k) = -p.gradient.row(i);
    lp.constraint_matrix(2 + 2 * i, i) = -1.0;
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw Error("bound problem did not solve to optimality");
  const double norm1 = -sol.objective_value;
  if (norm1 <= kNullOptimumTol)
    throw UnboundedPrecisionError(
        "bound problem optimum is zero: alpha overlaps the null space of G and "
        "q is not estimable");
  BoundSolution out;
  out.beta0 = sol.x.tail(k);
  out.u = 1.0 / norm1;
  return out;
}

WeightSolution solve_protocol(const EstimationProblem& p) {
  const int d = p.sensor_count();
  const int k = p.param_dim();

  // minimize s subject to G^T w = alpha, -s <= w_i <= s.
  // Variables: w (free, d), s (>= 0).
  LinearProgram lp = LinearProgram::make(d + 1, k + 2 * d);
  for (int i = 0; i < d; ++i) lp.set_free(i);
  lp.objective(d) = -1.0;
  for (int r = 0; r < k; ++r) {
    lp.constraint_matrix.block(r, 0, 1, d) = p.gradient.col(r).transpose();
    lp.rhs(r) = p.alpha(r);
    lp.relations[r] = Relation::Equal;
  }
  for (int i = 0; i < d; ++i) {
    lp.constraint_matrix(k + 2 * i, i) = 1.0;
    lp.constraint_matrix(k + 2 * i, d) = -1.0;
    lp.constraint_matrix(k + 2 * i + 1, i) = -1.0;
    lp.constraint_matrix(k + 2 * i + 1, d) = -1.0;
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible)
    throw InconsistentConstraintError(
        "consistency condition G^T w = alpha has no solution");
  if (sol.status != LpStatus::Optimal)
    throw Error("protocol problem did not solve to optimality");
  WeightSolution out;
  out.w0 = sol.x.head(d);
  out.u_prime = sol.x(d);
  return out;
}

DualSolution solve_dual(const EstimationProblem& p) {
  const int d = p.sensor_count();
  const int k = p.param_dim();

  // maximize alpha . v subject to sum t_i <= 1, -t_i <= (G v)_i <= t_i.
  // Variables: t (>= 0, d) first, then v (free, k), matching solve_bound's
  // vertex selection on degenerate optimal faces.
  LinearProgram lp = LinearProgram::make(d + k, 1 + 2 * d);
  for (int j = 0; j < k; ++j) lp.set_free(d + j);
  lp.objective.tail(k) = p.alpha;
  for (int i = 0; i < d; ++i) lp.constraint_matrix(0, i) = 1.0;
  lp.rhs(0) = 1.0;
  for (int i = 0; i < d; ++i) {
    lp.constraint_matrix.block(1 + 2 * i, d, 1, k) = p.gradient.row(i);
    lp.constraint_matrix(1 + 2 * i, i) = -1.0;
    lp.constraint_matrix.block(2 + 2 * i, d, 1, k) = -p.gradient.row(i);
    lp.constraint_matrix(2 + 2 * i, i) = -1.0;
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Unbounded)
    throw UnboundedPrecisionError(
        "dual protocol problem is unbounded: G has a null vector not "
        "orthogonal to alpha");
  if (sol.status != LpStatus::Optimal)
    throw Error("dual protocol problem did not solve to optimality");
  DualSolution out;
  out.v0 = sol.x.tail(k);
  out.u_dprime = sol.objective_value;
  return out;
}

UnentangledSolution unentangled_weights(const EstimationProblem& p) {
  if (!check_identifiability(p.gradient, p.alpha))
    throw InconsistentConstraintError(
        "consistency condition G^T w = alpha has no solution");
  // Minimum-norm least-squares solution of G^T w = alpha.
  const Matrix gt = p.gradient.transpose();
  Vector w = gt.completeOrthogonalDecomposition().solve(p.alpha);
  UnentangledSolution out;
  out.mse_coeff = w.squaredNorm();
  out.w = std::move(w);
  return out;
}

bool check_identifiability(const Matrix& gradient, const Vector& alpha) {
  if (alpha.size() != gradient.cols())
    throw DimensionError("alpha length does not match parameter count");
  const Matrix gt = gradient.transpose();
  const Vector w = gt.completeOrthogonalDecomposition().solve(alpha);
  const double residual = (gt * w - alpha).norm();
  return residual <= 1e-8 * alpha.norm();
}

bool has_full_rank(const Matrix& gradient) {
  Eigen::JacobiSVD<Matrix> svd(gradient);
  const auto& sv = svd.singularValues();
  if (sv.size() < gradient.cols()) return false;
  return sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0));
}

double mse_lower_bound(double u, double t) {
  if (t <= 0.0) throw DimensionError("interrogation time must be positive");
  if (u <= 0.0) throw DimensionError("bound value must be positive");
  return (u * u) / (t * t);
}

}  // namespace sensornet
