#include <doctest.h>

#include <cmath>

#include "sensornet/estimation.hpp"
#include "sensornet/fisher.hpp"
#include "sensornet/rng.hpp"
#include "support/toy_instance.hpp"

using namespace sensornet;

TEST_CASE("dual basis for alpha = (1, 0)") {
  Vector alpha(2);
  alpha << 1, 0;
  const BasisPair basis = build_dual_basis(alpha);
  CHECK(basis.permutation[0] == 0);
  CHECK(basis.jacobian(0, 0) == 1.0);
  CHECK(basis.jacobian(0, 1) == 0.0);
  CHECK(basis.jacobian(1, 1) == 1.0);
  CHECK(basis.beta1()(0) == doctest::Approx(1.0));
  CHECK(basis.beta1()(1) == 0.0);
}

TEST_CASE("max-magnitude component is permuted to the front") {
  Vector alpha(2);
  alpha << 0, 2;
  const BasisPair basis = build_dual_basis(alpha);
  CHECK(basis.permutation[0] == 1);
  CHECK(basis.jacobian(0, 0) == 2.0);
  CHECK(basis.beta1()(0) == doctest::Approx(0.5));
  CHECK(basis.beta1()(1) == 0.0);
}

TEST_CASE("ties break toward the lowest index") {
  Vector alpha(3);
  alpha << -2, 2, 1;
  const BasisPair basis = build_dual_basis(alpha);
  CHECK(basis.permutation[0] == 0);
}

TEST_CASE("J J^-1 = I for random alphas and all invariants hold") {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(1, 6);
    Vector alpha(k);
    for (int j = 0; j < k; ++j) alpha(j) = rng.uniform(-3.0, 3.0);
    if (alpha.cwiseAbs().maxCoeff() < 0.1) continue;
    const BasisPair basis = build_dual_basis(alpha);

    const Matrix prod = basis.jacobian * basis.jacobian_inverse;
    CHECK((prod - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10);

    Vector alpha_perm(k);
    for (int i = 0; i < k; ++i) alpha_perm(i) = alpha(basis.permutation[i]);
    CHECK((basis.jacobian.row(0).transpose() - alpha_perm).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(alpha_perm.dot(basis.beta1()) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(build_dual_basis(Vector::Zero(3)), DimensionError);
}

TEST_CASE("transform_fisher basic algebra") {
  Vector alpha(2);
  alpha << 1, 0;
  const BasisPair basis = build_dual_basis(alpha);
  const Matrix id = Matrix::Identity(2, 2);
  CHECK((transform_fisher(id, basis) - id).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(transform_fisher(asym, basis), DimensionError);
}

TEST_CASE("rank-one Fisher along alpha leaks nothing") {
  Rng rng(10101);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.uniform_int(2, 6);
    Vector alpha(k);
    for (int j = 0; j < k; ++j) alpha(j) = rng.uniform(-3.0, 3.0);
    if (alpha.cwiseAbs().maxCoeff() < 0.1) continue;
    const double c = rng.uniform(0.5, 4.0);
    const Matrix f_theta = c * (alpha * alpha.transpose());
    const BasisPair basis = build_dual_basis(alpha);
    const Matrix f_q = transform_fisher(f_theta, basis);

    for (int n = 1; n < k; ++n) {
      CHECK(std::abs(f_q(0, n)) <= 1e-9 * c);
      CHECK(std::abs(f_q(n, 0)) <= 1e-9 * c);
    }
    // F(q)_11 = l_11 / a_1^2 with l_11 read from the permuted input
    const int pivot = basis.permutation[0];
    const double l11 = f_theta(pivot, pivot);
    const double a1 = alpha(pivot);
    CHECK(f_q(0, 0) == doctest::Approx(l11 / (a1 * a1)).epsilon(1e-9));
  }
}

TEST_CASE("a diagonal non-proportional Fisher does leak") {
  Vector alpha(2);
  alpha << 1, 1;
  Matrix f_theta(2, 2);
  f_theta << 1, 0, 0, 2;
  const Matrix f_q = transform_fisher(f_theta, build_dual_basis(alpha));
  CHECK(std::abs(f_q(0, 1)) > 1e-3);
}

TEST_CASE("GHZ measurement Fisher is rank one along alpha") {
  const Matrix g = testsupport::toy_gradient();
  const Vector alpha = testsupport::toy_alpha();
  const Vector w0 = solve_protocol({g, alpha}).w0;
  const double t = 3.0;
  const Matrix fisher = ghz_rank_one_fisher(g, w0, t);

  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = t * t;
  CHECK((fisher - expected).cwiseAbs().maxCoeff() <= 1e-9);

  const Matrix f_q = transform_fisher(fisher, build_dual_basis(alpha));
  CHECK(std::abs(f_q(0, 1)) <= 1e-9);

  CHECK(ghz_rank_one_fisher(g, Vector::Zero(3), 1.0).cwiseAbs().maxCoeff() == 0.0);
}
