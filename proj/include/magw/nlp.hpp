#pragma once

#include "magw/types.hpp"

#include <functional>

namespace magw {

/// One scalar constraint g(x) with gradient. The solver's convention is
/// g(x) = 0 for equalities and g(x) >= 0 for inequalities.
struct ConstraintFn {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

/// General smooth constrained program: min f(x) subject to the first
/// num_equalities constraints as equalities and the rest as inequalities.
struct NlpProblem {
  Index dimension = 0;
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> gradient;
  std::vector<ConstraintFn> constraints;
  Index num_equalities = 0;

  Index num_constraints() const { return static_cast<Index>(constraints.size()); }
};

struct SolverConfig {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int line_search_max_steps = 30;
  double armijo_coefficient = 1e-4;
  double backtrack_factor = 0.5;
  double kkt_tolerance = 1e-6;  // Lagrangian-gradient norm required at exit
};

enum class TerminationReason {
  converged,
  max_iterations,
  subproblem_infeasible,
  line_search_failed,
};

const char* to_string(TerminationReason reason);

struct IterationRecord {
  Vector x;
  double f_value = 0.0;
  double step_norm = 0.0;   // ||d_k||_inf, 0 for the initial record
  double step_size = 0.0;   // alpha_k
  double merit = 0.0;
  Vector rho;
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  TerminationReason reason = TerminationReason::max_iterations;

  int iterations() const { return static_cast<int>(records.size()) - 1; }
};

}  // namespace magw
