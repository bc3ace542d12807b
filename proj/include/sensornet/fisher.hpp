#pragma once

#include <vector>

#include "sensornet/types.hpp"

namespace sensornet {

// Dual basis pair for the change of coordinates from theta to
// (q, q_2, ..., q_k). Row 1 of the Jacobian is alpha (after the recorded
// index permutation); the columns of the inverse are the dual vectors.
struct BasisPair {
  Matrix jacobian;          // J, rows alpha_n, in permuted coordinates
  Matrix jacobian_inverse;  // J^-1, columns beta_n
  std::vector<int> permutation;  // permuted index p -> original index

  Vector beta1() const { return jacobian_inverse.col(0); }
};

// Builds the ansatz basis: indices permuted so the max-magnitude component of
// alpha comes first (ties broken by lowest index), the free (k-1) x (k-1)
// block set to the identity.
BasisPair build_dual_basis(const Vector& alpha);

// (J^-1)^T F J^-1: the Fisher matrix with respect to the transformed
// coordinates. The input is given in original theta coordinates and is
// permuted internally to match the basis. Throws if F is asymmetric beyond
// 1e-8 relative.
Matrix transform_fisher(const Matrix& fisher_theta, const BasisPair& basis);

// Classical Fisher matrix of the weighted GHZ parity measurement at the
// two-quadrature operating point: t^2 (G^T w)(G^T w)^T. Under the consistency
// condition G^T w = alpha this is t^2 alpha alpha^T, i.e. rank one along
// alpha, so fixing the remaining coordinates leaks nothing about q.
Matrix ghz_rank_one_fisher(const Matrix& gradient, const Vector& w, double t);

}  // namespace sensornet
