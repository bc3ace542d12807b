#include "sensornet/lp.hpp"

#include <cmath>
#include <limits>

namespace sensornet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mapping from an original variable to its standard-form column(s).
struct VarMap {
  int col_plus = -1;
  int col_minus = -1;   // >= 0 only for free variables
  double shift = 0.0;   // x = shift + sign * y
  double sign = 1.0;
};

struct Tableau {
  // rows 0..m-1 constraints, last row reduced costs; last column rhs.
  Matrix t;
  std::vector<int> basic;        // basic variable per constraint row
  int num_cols = 0;              // variable columns (excludes rhs)
  int first_artificial = 0;      // columns >= this are artificials

  double& at(int r, int c) { return t(r, c); }
  int rows() const { return static_cast<int>(t.rows()) - 1; }

  // Bland: lowest-index column with reduced cost < -tol, artificials barred
  // once phase 1 is done.
  int entering(bool allow_artificial) const {
    const int limit = allow_artificial ? num_cols : first_artificial;
    const int zrow = rows();
    for (int j = 0; j < limit; ++j)
      if (t(zrow, j) < -kLpOptimalityTol) return j;
    return -1;
  }

  // Min-ratio row; ties broken by lowest basic-variable index.
  int leaving(int col) const {
    int row = -1;
    double best = kInf;
    for (int i = 0; i < rows(); ++i) {
      const double a = t(i, col);
      if (a <= kLpFeasibilityTol) continue;
      const double ratio = t(i, num_cols) / a;
      if (ratio < best - kLpFeasibilityTol ||
          (ratio < best + kLpFeasibilityTol && (row < 0 || basic[i] < basic[row]))) {
        best = ratio;
        row = i;
      }
    }
    return row;
  }

  void pivot(int row, int col) {
    const double p = t(row, col);
    t.row(row) /= p;
    for (int i = 0; i <= rows(); ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basic[row] = col;
  }
};

// Runs simplex iterations on the current reduced-cost row. Returns false when
// the problem is unbounded in the current objective.
bool run_simplex(Tableau& tab, bool allow_artificial) {
  // Bland's rule terminates; the cap is a hard safety net only.
  const long max_iters = 2000L * (static_cast<long>(tab.num_cols) + tab.rows() + 10);
  for (long iter = 0; iter < max_iters; ++iter) {
    const int col = tab.entering(allow_artificial);
    if (col < 0) return true;
    const int row = tab.leaving(col);
    if (row < 0) return false;
    tab.pivot(row, col);
  }
  throw Error("simplex iteration cap exceeded");
}

}  // namespace

LinearProgram LinearProgram::make(int n_vars, int n_rows) {
  LinearProgram lp;
  lp.objective = Vector::Zero(n_vars);
  lp.constraint_matrix = Matrix::Zero(n_rows, n_vars);
  lp.rhs = Vector::Zero(n_rows);
  lp.relations.assign(n_rows, Relation::LessEqual);
  lp.lower = Vector::Zero(n_vars);
  lp.upper = Vector::Constant(n_vars, kInf);
  return lp;
}

void LinearProgram::set_free(int var) {
  lower(var) = -kInf;
  upper(var) = kInf;
}

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (n < 1 || m < 1) throw DimensionError("linear program must have m,n >= 1");
  if (lp.constraint_matrix.rows() != m || lp.constraint_matrix.cols() != n ||
      static_cast<int>(lp.relations.size()) != m || lp.lower.size() != n ||
      lp.upper.size() != n)
    throw DimensionError("linear program dimensions are inconsistent");
  if (!lp.objective.allFinite() || !lp.constraint_matrix.allFinite() || !lp.rhs.allFinite())
    throw DimensionError("linear program has non-finite data");

  // Substitute every variable by nonnegative parts. Finite upper bounds turn
  // into extra <= rows.
  std::vector<VarMap> vmap(n);
  int n_std = 0;
  int extra_rows = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower(j);
    const double hi = lp.upper(j);
    if (lo > hi) return LpSolution{LpStatus::Infeasible, Vector::Zero(n), 0.0, {}};
    if (std::isfinite(lo)) {
      vmap[j] = VarMap{n_std++, -1, lo, 1.0};
      if (std::isfinite(hi)) ++extra_rows;
    } else if (std::isfinite(hi)) {
      vmap[j] = VarMap{n_std++, -1, hi, -1.0};
    } else {
      vmap[j].col_plus = n_std++;
      vmap[j].col_minus = n_std++;
    }
  }

  const int m_all = m + extra_rows;
  // Standard-form rows: A_std y (<=,=) b_std, y >= 0.
  Matrix a_std = Matrix::Zero(m_all, n_std);
  Vector b_std = Vector::Zero(m_all);
  std::vector<Relation> rel(m_all, Relation::LessEqual);
  for (int i = 0; i < m; ++i) {
    double b = lp.rhs(i);
    for (int j = 0; j < n; ++j) {
      const double a = lp.constraint_matrix(i, j);
      if (a == 0.0) continue;
      b -= a * vmap[j].shift;
      a_std(i, vmap[j].col_plus) += a * vmap[j].sign;
      if (vmap[j].col_minus >= 0) a_std(i, vmap[j].col_minus) -= a;
    }
    b_std(i) = b;
    rel[i] = lp.relations[i];
  }
  {
    int r = m;
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(lp.lower(j)) && std::isfinite(lp.upper(j))) {
        a_std(r, vmap[j].col_plus) = 1.0;
        b_std(r) = lp.upper(j) - lp.lower(j);
        rel[r] = Relation::LessEqual;
        ++r;
      }
    }
  }

  // Power-of-two row equilibration: exact in floating point, so well-scaled
  // problems are untouched while wildly scaled rows stop poisoning the
  // phase-1 tolerances.
  for (int i = 0; i < m_all; ++i) {
    const double mag = a_std.row(i).cwiseAbs().maxCoeff();
    if (mag > 0.0) {
      const double scale = std::exp2(std::round(std::log2(mag)));
      a_std.row(i) /= scale;
      b_std(i) /= scale;
    }
  }

  // Objective in standard variables (additive constant dropped; the value is
  // recomputed from x at the end).
  Vector c_std = Vector::Zero(n_std);
  for (int j = 0; j < n; ++j) {
    c_std(vmap[j].col_plus) += lp.objective(j) * vmap[j].sign;
    if (vmap[j].col_minus >= 0) c_std(vmap[j].col_minus) -= lp.objective(j);
  }

  // Orient rows to nonnegative rhs, then attach slack/artificial columns.
  enum class RowKind { Slack, Artificial };
  std::vector<RowKind> row_kind(m_all);
  int n_slack = 0;
  int n_art = 0;
  for (int i = 0; i < m_all; ++i) {
    bool flipped = b_std(i) < 0.0;
    if (flipped) {
      a_std.row(i) = -a_std.row(i);
      b_std(i) = -b_std(i);
    }
    if (rel[i] == Relation::Equal) {
      row_kind[i] = RowKind::Artificial;
      ++n_art;
    } else if (!flipped) {
      row_kind[i] = RowKind::Slack;  // <= with b >= 0
      ++n_slack;
    } else {
      row_kind[i] = RowKind::Artificial;  // became >=: surplus + artificial
      ++n_slack;
      ++n_art;
    }
  }

  const int total_cols = n_std + n_slack + n_art;
  Tableau tab;
  tab.t = Matrix::Zero(m_all + 1, total_cols + 1);
  tab.t.block(0, 0, m_all, n_std) = a_std;
  tab.t.col(total_cols).head(m_all) = b_std;
  tab.num_cols = total_cols;
  tab.first_artificial = n_std + n_slack;
  tab.basic.assign(m_all, -1);

  {
    int s = n_std;
    int a = n_std + n_slack;
    for (int i = 0; i < m_all; ++i) {
      if (rel[i] == Relation::LessEqual) {
        // original <= (slack basic) or flipped >= (surplus, artificial basic)
        if (row_kind[i] == RowKind::Slack) {
          tab.t(i, s) = 1.0;
          tab.basic[i] = s;
          ++s;
        } else {
          tab.t(i, s) = -1.0;
          ++s;
          tab.t(i, a) = 1.0;
          tab.basic[i] = a;
          ++a;
        }
      } else {
        tab.t(i, a) = 1.0;
        tab.basic[i] = a;
        ++a;
      }
    }
  }

  // Phase 1: maximize -(sum of artificials); reduced costs z_j = sum of
  // artificial-basic rows' coefficients, negated appropriately.
  if (n_art > 0) {
    const int zrow = m_all;
    for (int i = 0; i < m_all; ++i) {
      if (tab.basic[i] >= tab.first_artificial) tab.t.row(zrow) -= tab.t.row(i);
    }
    for (int j = tab.first_artificial; j < total_cols; ++j) tab.t(zrow, j) += 1.0;
    // Phase 1 is bounded by construction; an unbounded report means the
    // tableau degraded numerically (coefficient ratios beyond tolerance).
    if (!run_simplex(tab, true))
      throw Error("linear program is too ill-conditioned for the tableau tolerances");
    if (tab.t(zrow, total_cols) < -1e-7)
      return LpSolution{LpStatus::Infeasible, Vector::Zero(n), 0.0, {}};
    // Pivot basic artificials out where possible; rows that stay artificial
    // are redundant and sit at zero.
    for (int i = 0; i < m_all; ++i) {
      if (tab.basic[i] < tab.first_artificial) continue;
      for (int j = 0; j < tab.first_artificial; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-7) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 reduced costs: z_j = c_B . col_j - c_j over the current tableau.
  {
    const int zrow = m_all;
    tab.t.row(zrow).setZero();
    for (int j = 0; j < total_cols + 1; ++j) {
      double z = (j < n_std) ? -c_std(j) : 0.0;
      if (j == total_cols) z = 0.0;
      for (int i = 0; i < m_all; ++i) {
        const int b = tab.basic[i];
        if (b < n_std) z += c_std(b) * tab.t(i, j);
      }
      tab.t(zrow, j) = z;
    }
    if (!run_simplex(tab, false))
      return LpSolution{LpStatus::Unbounded, Vector::Zero(n), 0.0, {}};
  }

  // Read the standard-form solution and map back.
  Vector y = Vector::Zero(total_cols);
  for (int i = 0; i < m_all; ++i) y(tab.basic[i]) = tab.t(i, total_cols);
  Vector x(n);
  for (int j = 0; j < n; ++j) {
    double v = vmap[j].sign * y(vmap[j].col_plus) + vmap[j].shift;
    if (vmap[j].col_minus >= 0) v -= y(vmap[j].col_minus);
    x(j) = v;
  }

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x = x;
  sol.objective_value = lp.objective.dot(x);
  const Vector residual = lp.constraint_matrix * x - lp.rhs;
  const double scale = 1.0 + lp.rhs.cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    if (std::abs(residual(i)) <= 1e-7 * scale) sol.active_rows.push_back(i);
  return sol;
}

}  // namespace sensornet
