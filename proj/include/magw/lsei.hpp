#pragma once

#include "magw/types.hpp"

namespace magw {

/// Linear least squares with linear equality and inequality constraints:
///   min ||E d - f||_2  s.t.  A_eq d = b_eq,  A_in d >= b_in.
struct LseiInstance {
  Matrix design;   // E, r x n
  Vector target;   // f
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix ineq_matrix;
  Vector ineq_rhs;

  Index dimension() const { return design.cols(); }
};

struct LseiSolution {
  Vector d;
  Vector multipliers;  // equality rows first, then inequality rows
  std::vector<Index> active_set;  // indices into the inequality rows
};

struct LseiInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LseiRankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Equality elimination by orthogonal reduction, then a Lawson-Hanson style
/// nonnegative least squares pass on the reduced inequality problem.
LseiSolution solve_lsei(const LseiInstance& instance);

/// min ||A u - y||_2 s.t. u >= 0, smallest-index entering rule.
Vector nnls(const Matrix& A, const Vector& y, int max_exchanges = 0);

}  // namespace magw
