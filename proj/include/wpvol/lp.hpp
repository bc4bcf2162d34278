#pragma once

#include "wpvol/rational.hpp"

#include <vector>

namespace wpvol {

enum class Relation { LessEq, GreaterEq, Equal };

// maximize objective . x subject to the rows and x >= 0, exactly over Q
struct LinearProgram {
  explicit LinearProgram(int vars) : num_vars(vars), objective(static_cast<std::size_t>(vars)) {}

  void add(std::vector<Rational> coeffs, Relation rel, Rational rhs);

  struct Row {
    std::vector<Rational> coeffs;
    Relation rel;
    Rational rhs;
  };
  int num_vars;
  std::vector<Rational> objective;
  std::vector<Row> rows;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

// Two-phase tableau simplex with Bland's rule (terminates, no cycling).
LpResult maximize(const LinearProgram& lp);

}  // namespace wpvol
