#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sensornet/lp.hpp"
#include "sensornet/rng.hpp"
#include "support/toy_instance.hpp"

using namespace sensornet;

TEST_CASE("single variable box") {
  // maximize x subject to x <= 1, x >= 0
  LinearProgram lp = LinearProgram::make(1, 1);
  lp.objective(0) = 1.0;
  lp.constraint_matrix(0, 0) = 1.0;
  lp.rhs(0) = 1.0;
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::find(sol.active_rows.begin(), sol.active_rows.end(), 0) != sol.active_rows.end());
}

TEST_CASE("degenerate optimum face still returns a vertex") {
  // maximize x + y subject to x + y <= 1, x, y >= 0: every point of the face
  // is optimal; the solver must return a corner.
  LinearProgram lp = LinearProgram::make(2, 1);
  lp.objective << 1.0, 1.0;
  lp.constraint_matrix << 1.0, 1.0;
  lp.rhs(0) = 1.0;
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-12));
  const bool at_vertex =
      (std::abs(sol.x(0) - 1.0) < 1e-9 && std::abs(sol.x(1)) < 1e-9) ||
      (std::abs(sol.x(1) - 1.0) < 1e-9 && std::abs(sol.x(0)) < 1e-9);
  CHECK(at_vertex);
}

TEST_CASE("toy protocol problem solved as a raw LP") {
  // minimize s subject to G^T w = alpha, -s <= w_i <= s (so maximize -s).
  const Matrix g = testsupport::toy_gradient();
  const Vector alpha = testsupport::toy_alpha();
  const int d = 3;
  LinearProgram lp = LinearProgram::make(d + 1, 2 + 2 * d);
  for (int i = 0; i < d; ++i) lp.set_free(i);
  lp.objective(d) = -1.0;
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < d; ++i) lp.constraint_matrix(r, i) = g(i, r);
    lp.rhs(r) = alpha(r);
    lp.relations[r] = Relation::Equal;
  }
  for (int i = 0; i < d; ++i) {
    lp.constraint_matrix(2 + 2 * i, i) = 1.0;
    lp.constraint_matrix(2 + 2 * i, d) = -1.0;
    lp.constraint_matrix(3 + 2 * i, i) = -1.0;
    lp.constraint_matrix(3 + 2 * i, d) = -1.0;
  }
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x(d) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("infeasible and unbounded statuses") {
  {
    // x <= -1 with x >= 0
    LinearProgram lp = LinearProgram::make(1, 1);
    lp.objective(0) = 1.0;
    lp.constraint_matrix(0, 0) = 1.0;
    lp.rhs(0) = -1.0;
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  }
  {
    // maximize x with only x >= 5
    LinearProgram lp = LinearProgram::make(1, 1);
    lp.objective(0) = 1.0;
    lp.constraint_matrix(0, 0) = -1.0;
    lp.rhs(0) = -5.0;
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
  }
  {
    // free variable, maximize x, x <= y with y free: unbounded
    LinearProgram lp = LinearProgram::make(2, 1);
    lp.set_free(0);
    lp.set_free(1);
    lp.objective(0) = 1.0;
    lp.constraint_matrix(0, 0) = 1.0;
    lp.constraint_matrix(0, 1) = -1.0;
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
  }
}

TEST_CASE("finite upper bounds") {
  // maximize x + 2y subject to x + y <= 3, 0 <= x <= 1, -1 <= y <= 1.5
  LinearProgram lp = LinearProgram::make(2, 1);
  lp.objective << 1.0, 2.0;
  lp.constraint_matrix << 1.0, 1.0;
  lp.rhs(0) = 3.0;
  lp.upper(0) = 1.0;
  lp.lower(1) = -1.0;
  lp.upper(1) = 1.5;
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.x(1) == doctest::Approx(1.5).epsilon(1e-12));
}

namespace {

// Random primal in canonical form: maximize c.x, A x <= b, x >= 0 with b > 0
// (always feasible at the origin).
LinearProgram random_canonical(Rng& rng, int n, int m) {
  LinearProgram lp = LinearProgram::make(n, m);
  for (int j = 0; j < n; ++j) lp.objective(j) = rng.uniform(-1.0, 2.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.constraint_matrix(i, j) = rng.uniform(-0.5, 2.0);
    lp.rhs(i) = rng.uniform(0.5, 3.0);
  }
  return lp;
}

}  // namespace

TEST_CASE("weak duality against the hand-built dual") {
  Rng rng(99);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const int m = rng.uniform_int(1, 6);
    const LinearProgram primal = random_canonical(rng, n, m);
    const LpSolution psol = solve_lp(primal);
    if (psol.status != LpStatus::Optimal) continue;

    // dual: minimize b.y subject to A^T y >= c, y >= 0
    LinearProgram dual = LinearProgram::make(m, n);
    dual.objective = -primal.rhs;  // maximize -b.y
    dual.constraint_matrix = -primal.constraint_matrix.transpose();  // -A^T y <= -c
    dual.rhs = -primal.objective;
    const LpSolution dsol = solve_lp(dual);
    REQUIRE(dsol.status == LpStatus::Optimal);
    const double dual_value = -dsol.objective_value;
    CHECK(psol.objective_value <= dual_value + 1e-9);
    // strong duality holds too for these instances
    CHECK(psol.objective_value == doctest::Approx(dual_value).epsilon(1e-8));

    // primal feasibility of the reported optimum
    const Vector slack = primal.rhs - primal.constraint_matrix * psol.x;
    CHECK(slack.minCoeff() >= -1e-9);
    CHECK(psol.x.minCoeff() >= -1e-9);
    ++solved;
  }
  CHECK(solved > 20);
}

TEST_CASE("row permutation does not change the optimum") {
  Rng rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(1, 5);
    const int m = rng.uniform_int(2, 6);
    const LinearProgram lp = random_canonical(rng, n, m);
    const LpSolution ref = solve_lp(lp);
    if (ref.status != LpStatus::Optimal) continue;

    LinearProgram permuted = lp;
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = m - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    for (int i = 0; i < m; ++i) {
      permuted.constraint_matrix.row(i) = lp.constraint_matrix.row(perm[i]);
      permuted.rhs(i) = lp.rhs(perm[i]);
      permuted.relations[i] = lp.relations[perm[i]];
    }
    const LpSolution got = solve_lp(permuted);
    REQUIRE(got.status == LpStatus::Optimal);
    CHECK(got.objective_value == doctest::Approx(ref.objective_value).epsilon(1e-9));
  }
}

TEST_CASE("identical input gives identical output") {
  Rng rng(555);
  const LinearProgram lp = random_canonical(rng, 4, 5);
  const LpSolution a = solve_lp(lp);
  const LpSolution b = solve_lp(lp);
  REQUIRE(a.status == b.status);
  CHECK(a.objective_value == b.objective_value);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
}
