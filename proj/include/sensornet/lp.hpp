#pragma once

#include <vector>

#include "sensornet/types.hpp"

namespace sensornet {

enum class Relation { LessEqual, Equal };

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Small dense linear program, maximization convention:
//
//   maximize    objective . x
//   subject to  constraint_matrix x  (<= or =)  rhs   row-wise
//               lower <= x <= upper               (entries may be +-inf)
//
// Problem sizes here are tens of variables, so a dense tableau is fine.
struct LinearProgram {
  Vector objective;
  Matrix constraint_matrix;
  Vector rhs;
  std::vector<Relation> relations;
  Vector lower;
  Vector upper;

  // n variables with default bounds 0 <= x < inf, m zeroed rows.
  static LinearProgram make(int n_vars, int n_rows);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }
  void set_free(int var);  // -inf < x_var < inf
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective_value = 0.0;
  std::vector<int> active_rows;  // constraints tight at the optimum
};

// Two-phase tableau simplex with Bland's pivot rule (lowest eligible index
// enters; among tied ratios the row whose basic variable has the lowest index
// leaves). Deterministic for identical input and immune to cycling on
// degenerate vertices. Free variables are split into positive/negative parts
// internally. Returns a vertex optimum when status is Optimal.
LpSolution solve_lp(const LinearProgram& lp);

inline constexpr double kLpFeasibilityTol = 1e-9;
inline constexpr double kLpOptimalityTol = 1e-9;

}  // namespace sensornet
