#pragma once

#include <utility>
#include <vector>

namespace abce::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

enum class Sense : char { le, ge, eq };

struct Constraint {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::le;
  double rhs = 0.0;
};

/// maximize objective . x  subject to the constraint rows and x >= 0.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> rows;
};

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase simplex with a Bland fallback against cycling. Meant for
/// desk-scale programs (a few thousand columns).
Solution solve(const Problem& p, long long max_iterations = 200000);

}  // namespace abce::lp
