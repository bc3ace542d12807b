#pragma once

#include <cstdint>
#include <vector>

#include "sensornet/types.hpp"

namespace sensornet {

// Certificate for the dual protocol problem found by exhaustive vertex
// enumeration: at an optimal vertex at least k-1 components of G v vanish and
// the corresponding rows of G are linearly independent.
struct VertexCertificate {
  double value = 0.0;          // alpha . v at the best vertex
  Vector v;                    // normalized so |G v|_1 = 1, alpha . v >= 0
  std::vector<int> zero_rows;  // rows i with (G v)_i = 0 (0-based)
};

// Enumerates every (k-1)-subset of rows of G with rank k-1, takes the
// one-dimensional null-space direction of the submatrix, normalizes and
// orients it, and returns the maximizer of alpha . v. Cost is C(d, k-1), so
// instances are capped at d <= 12, k <= 4.
VertexCertificate enumerate_dual_vertices(const Matrix& gradient, const Vector& alpha);

// Max of 1/|G beta|_1 over a grid on the affine slice alpha . beta = 1 within
// the given radius of the particular solution. A restriction of the bound
// problem, so always <= u. Supports k <= 3.
double grid_bound_search(const Matrix& gradient, const Vector& alpha, double radius,
                         int points_per_axis);

// beta = alpha/|alpha|^2 + z with z a random vector in the orthogonal
// complement of alpha; satisfies alpha . beta = 1 to machine precision.
Vector random_feasible_beta(const Vector& alpha, std::uint64_t seed);

}  // namespace sensornet
