#include "sensornet/fisher.hpp"

#include <cmath>

namespace sensornet {

BasisPair build_dual_basis(const Vector& alpha) {
  const int k = static_cast<int>(alpha.size());
  if (k < 1 || alpha.cwiseAbs().maxCoeff() == 0.0)
    throw DimensionError("alpha must be nonzero");

  // Bring the max-magnitude component to the front; lowest index wins ties.
  int pivot = 0;
  for (int i = 1; i < k; ++i)
    if (std::abs(alpha(i)) > std::abs(alpha(pivot))) pivot = i;

  BasisPair out;
  out.permutation.resize(k);
  out.permutation[0] = pivot;
  for (int i = 0, p = 1; i < k; ++i)
    if (i != pivot) out.permutation[p++] = i;

  Vector a_perm(k);
  for (int i = 0; i < k; ++i) a_perm(i) = alpha(out.permutation[i]);
  const double a1 = a_perm(0);

  // J: row 1 = alpha, rows n>=2 = (0, e_{n-1}) with the free block V = I.
  // J^-1 columns: beta_1 = (1/a1, 0, ...), beta_n = (-a_n/a1, e_{n-1}).
  Matrix j = Matrix::Zero(k, k);
  Matrix jinv = Matrix::Zero(k, k);
  j.row(0) = a_perm.transpose();
  jinv(0, 0) = 1.0 / a1;
  for (int n = 1; n < k; ++n) {
    j(n, n) = 1.0;
    jinv(0, n) = -a_perm(n) / a1;
    jinv(n, n) = 1.0;
  }
  out.jacobian = std::move(j);
  out.jacobian_inverse = std::move(jinv);
  return out;
}

Matrix transform_fisher(const Matrix& fisher_theta, const BasisPair& basis) {
  const int k = static_cast<int>(basis.jacobian.rows());
  if (fisher_theta.rows() != k || fisher_theta.cols() != k)
    throw DimensionError("Fisher matrix dimension does not match basis");
  const double scale = std::max(1.0, fisher_theta.cwiseAbs().maxCoeff());
  if ((fisher_theta - fisher_theta.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw DimensionError("Fisher matrix is not symmetric");

  Matrix f_perm(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      f_perm(r, c) = fisher_theta(basis.permutation[r], basis.permutation[c]);

  Matrix out = basis.jacobian_inverse.transpose() * f_perm * basis.jacobian_inverse;
  out = 0.5 * (out + out.transpose().eval());
  return out;
}

Matrix ghz_rank_one_fisher(const Matrix& gradient, const Vector& w, double t) {
  if (t <= 0.0) throw DimensionError("interrogation time must be positive");
  if (w.size() != gradient.rows())
    throw DimensionError("weight length does not match sensor count");
  const Vector gw = gradient.transpose() * w;
  return (t * t) * (gw * gw.transpose());
}

}  // namespace sensornet
