#include "sensornet/oracle.hpp"

#include <cmath>

#include "sensornet/rng.hpp"

namespace sensornet {

namespace {

constexpr double kRankTol = 1e-10;

// Next (k-1)-subset of {0..d-1} in lexicographic order; returns false when
// exhausted. An empty subset (k = 1) yields exactly one iteration.
bool next_subset(std::vector<int>& idx, int d) {
  const int r = static_cast<int>(idx.size());
  if (r == 0) return false;
  int i = r - 1;
  while (i >= 0 && idx[i] == d - r + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

VertexCertificate enumerate_dual_vertices(const Matrix& gradient, const Vector& alpha) {
  const int d = static_cast<int>(gradient.rows());
  const int k = static_cast<int>(gradient.cols());
  if (alpha.size() != k) throw DimensionError("alpha length does not match G");
  if (d > 12 || k > 4)
    throw InstanceTooLargeError("vertex enumeration is capped at d <= 12, k <= 4");
  if (d < k) throw RankDeficientError("vertex enumeration needs d >= k");

  {
    Eigen::JacobiSVD<Matrix> svd(gradient);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankTol * std::max(1.0, sv(0)))
      throw RankDeficientError("G must have full column rank");
  }

  VertexCertificate best;
  bool found = false;

  std::vector<int> subset(k - 1);
  for (int i = 0; i < k - 1; ++i) subset[i] = i;
  bool more = true;
  while (more) {
    Matrix sub(k - 1, k);
    for (int r = 0; r < k - 1; ++r) sub.row(r) = gradient.row(subset[r]);

    // One-dimensional null space requires the subset to have rank k-1;
    // deficient subsets are skipped.
    Eigen::FullPivLU<Matrix> lu(sub);
    lu.setThreshold(kRankTol);
    if (k == 1 || lu.rank() == k - 1) {
      Vector v;
      if (k == 1) {
        v = Vector::Ones(1);
      } else {
        v = lu.kernel().col(0);
      }
      const double norm1 = (gradient * v).lpNorm<1>();
      if (norm1 > kRankTol) {
        v /= norm1;
        double value = alpha.dot(v);
        if (value < 0.0) {
          v = -v;
          value = -value;
        }
        if (!found || value > best.value) {
          best.value = value;
          best.v = v;
          best.zero_rows.clear();
          const Vector gv = gradient * v;
          for (int i = 0; i < d; ++i)
            if (std::abs(gv(i)) <= 1e-9) best.zero_rows.push_back(i);
          found = true;
        }
      }
    }
    more = next_subset(subset, d);
  }

  if (!found) throw RankDeficientError("no rank-(k-1) row subset found");
  return best;
}

double grid_bound_search(const Matrix& gradient, const Vector& alpha, double radius,
                         int points_per_axis) {
  const int k = static_cast<int>(gradient.cols());
  if (alpha.size() != k) throw DimensionError("alpha length does not match G");
  if (k > 3) throw InstanceTooLargeError("grid search is capped at k <= 3");
  if (radius <= 0.0 || points_per_axis < 1)
    throw DimensionError("grid search needs positive radius and point count");

  const Vector beta_particular = alpha / alpha.squaredNorm();

  // Orthonormal basis of the complement of alpha from full QR.
  Matrix q = Eigen::HouseholderQR<Matrix>(alpha).householderQ();
  const int free_dims = k - 1;

  double best = 0.0;
  std::vector<int> idx(free_dims, 0);
  while (true) {
    Vector beta = beta_particular;
    for (int a = 0; a < free_dims; ++a) {
      const double c =
          points_per_axis == 1
              ? 0.0
              : -radius + 2.0 * radius * idx[a] / static_cast<double>(points_per_axis - 1);
      beta += c * q.col(a + 1);
    }
    const double norm1 = (gradient * beta).lpNorm<1>();
    if (norm1 > 1e-300) best = std::max(best, 1.0 / norm1);

    int a = 0;
    for (; a < free_dims; ++a) {
      if (++idx[a] < points_per_axis) break;
      idx[a] = 0;
    }
    if (a == free_dims) break;
  }
  return best;
}

Vector random_feasible_beta(const Vector& alpha, std::uint64_t seed) {
  const int k = static_cast<int>(alpha.size());
  if (k < 1 || alpha.cwiseAbs().maxCoeff() == 0.0)
    throw DimensionError("alpha must be nonzero");
  Rng rng(seed);
  Vector z(k);
  for (int i = 0; i < k; ++i) z(i) = rng.uniform(-1.0, 1.0);
  z -= alpha * (alpha.dot(z) / alpha.squaredNorm());
  return alpha / alpha.squaredNorm() + z;
}

}  // namespace sensornet
