#include "abce/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abce::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

struct Tableau {
  int rows = 0;
  int cols = 0;  // structural + slack + artificial columns, excluding rhs
  std::vector<double> a;  // rows x (cols + 1), last column is the rhs
  std::vector<double> obj;  // reduced cost row, size cols + 1 (last = -value)
  std::vector<int> basis;

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * (cols + 1) + c]; }

  void pivot(int pr, int pc) {
    double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    double f = obj[pc];
    if (f != 0.0) {
      for (int c = 0; c <= cols; ++c) obj[c] -= f * at(pr, c);
      obj[pc] = 0.0;
    }
    basis[pr] = pc;
  }
};

// Runs the simplex on the current objective row; entering columns are
// restricted to [0, usable_cols) so artificials never re-enter the basis.
Status optimize(Tableau& t, int usable_cols, long long& iterations_left) {
  long long degenerate_streak = 0;
  while (true) {
    if (iterations_left-- <= 0) return Status::iteration_limit;
    bool bland = degenerate_streak > 2LL * (t.rows + t.cols);
    int pc = -1;
    if (bland) {
      for (int c = 0; c < usable_cols; ++c) {
        if (t.obj[c] > kCostTol) {
          pc = c;
          break;
        }
      }
    } else {
      double best = kCostTol;
      for (int c = 0; c < usable_cols; ++c) {
        if (t.obj[c] > best) {
          best = t.obj[c];
          pc = c;
        }
      }
    }
    if (pc < 0) return Status::optimal;
    int pr = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows; ++r) {
      double coef = t.at(r, pc);
      if (coef > kPivotTol) {
        double ratio = t.at(r, t.cols) / coef;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (pr < 0 || t.basis[r] < t.basis[pr]))) {
          best_ratio = ratio;
          pr = r;
        }
      }
    }
    if (pr < 0) return Status::unbounded;
    if (best_ratio < 1e-12) {
      ++degenerate_streak;
    } else {
      degenerate_streak = 0;
    }
    t.pivot(pr, pc);
  }
}

}  // namespace

Solution solve(const Problem& p, long long max_iterations) {
  const int n = p.num_vars;
  const int m = static_cast<int>(p.rows.size());
  if (static_cast<int>(p.objective.size()) != n) {
    throw std::invalid_argument("lp: objective size mismatch");
  }

  // Column layout: structural | slack/surplus | artificial.
  int num_slack = 0;
  for (const auto& row : p.rows) {
    if (row.sense != Sense::eq) ++num_slack;
  }
  Tableau t;
  t.rows = m;
  t.cols = n + num_slack + m;  // one artificial column reserved per row
  t.a.assign(static_cast<std::size_t>(m) * (t.cols + 1), 0.0);
  t.basis.assign(m, -1);

  int slack_at = n;
  int art_at = n + num_slack;
  std::vector<int> artificial_col(m, -1);
  for (int r = 0; r < m; ++r) {
    const auto& row = p.rows[r];
    double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    for (const auto& [var, coef] : row.terms) {
      if (var < 0 || var >= n) throw std::invalid_argument("lp: variable out of range");
      t.at(r, var) += sign * coef;
    }
    t.at(r, t.cols) = sign * row.rhs;
    Sense sense = row.sense;
    if (sign < 0.0) {
      if (sense == Sense::le) sense = Sense::ge;
      else if (sense == Sense::ge) sense = Sense::le;
    }
    if (sense == Sense::le) {
      t.at(r, slack_at) = 1.0;
      t.basis[r] = slack_at++;
    } else if (sense == Sense::ge) {
      t.at(r, slack_at) = -1.0;
      ++slack_at;
    }
    if (t.basis[r] < 0) {
      t.at(r, art_at) = 1.0;
      t.basis[r] = art_at;
      artificial_col[r] = art_at;
      ++art_at;
    }
  }
  const int first_artificial = n + num_slack;

  // Phase 1: drive the artificial variables to zero.
  t.obj.assign(t.cols + 1, 0.0);
  for (int r = 0; r < m; ++r) {
    if (artificial_col[r] >= 0) {
      for (int c = 0; c <= t.cols; ++c) t.obj[c] += t.at(r, c);
    }
  }
  for (int c = first_artificial; c < t.cols; ++c) t.obj[c] = 0.0;
  long long budget = max_iterations;
  Status st = optimize(t, first_artificial, budget);
  if (st == Status::iteration_limit) return {st, 0.0, {}};
  // The rhs cell of the objective row tracks the remaining total
  // infeasibility; it stays nonnegative and hits ~0 iff a feasible basis
  // was found.
  if (t.obj[t.cols] > 1e-7) return {Status::infeasible, 0.0, {}};

  // Pivot remaining basic artificials out where possible.
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] >= first_artificial) {
      int pc = -1;
      for (int c = 0; c < first_artificial; ++c) {
        if (std::abs(t.at(r, c)) > kPivotTol) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) {
        t.obj.assign(t.cols + 1, 0.0);  // dummy row; rebuilt below
        t.pivot(r, pc);
      }
    }
  }

  // Phase 2 on the real objective; artificial columns stay out.
  t.obj.assign(t.cols + 1, 0.0);
  for (int c = 0; c < n; ++c) t.obj[c] = p.objective[c];
  for (int r = 0; r < m; ++r) {
    int b = t.basis[r];
    double coef = b < n ? p.objective[b] : 0.0;
    if (coef != 0.0) {
      for (int c = 0; c <= t.cols; ++c) t.obj[c] -= coef * t.at(r, c);
      t.obj[b] = 0.0;
    }
  }
  st = optimize(t, first_artificial, budget);
  if (st != Status::optimal) return {st, 0.0, {}};

  Solution sol;
  sol.status = Status::optimal;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < n) sol.x[t.basis[r]] = t.at(r, t.cols);
  }
  double value = 0.0;
  for (int c = 0; c < n; ++c) value += p.objective[c] * sol.x[c];
  sol.objective = value;
  return sol;
}

}  // namespace abce::lp
