#pragma once

#include "magw/lsei.hpp"
#include "magw/nlp.hpp"

namespace magw {

struct LdlFactors {
  Matrix L;  // unit lower triangular
  Vector D;  // positive diagonal
};

struct LdlPivotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// B = L D L^T with unit lower triangular L; throws LdlPivotError when a
/// pivot is not positive.
LdlFactors ldl_factorize(const Matrix& B);

struct IterationState {
  Vector x;
  Matrix B;
  Vector rho;
  int iteration = 0;
  double f_value = 0.0;
  Vector multipliers;
};

struct SlsqpResult {
  Vector x;
  Vector multipliers;
  SolveTrace trace;
};

/// Quadratic subproblem in least-squares form: the objective encodes
/// min 1/2 d^T B d + grad_f^T d via E = D^{1/2} L^T, f = -D^{-1/2} L^{-1} grad_f,
/// with the linearized constraints of the problem at x.
LseiInstance build_qp_subproblem(const IterationState& state, const NlpProblem& problem);

/// Exact penalty merit: f(x) + sum_eq rho_j |g_j| + sum_ineq rho_j |min(0, g_j)|.
double merit_value(const NlpProblem& problem, const Vector& x, const Vector& rho);

/// Backtracking Armijo search on the merit along d; throws on zero directions
/// and returns 0 when no acceptable step is found.
double line_search(const NlpProblem& problem, const IterationState& state,
                   const Vector& d, const SolverConfig& config);

/// rho_j = max{ (rho_prev_j + |mu_j|) / 2, |mu_j| }.
Vector update_penalty(const Vector& rho_prev, const Vector& mu);

/// Damped BFGS step keeping B positive definite (theta blending of the
/// curvature pair).
Matrix damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& eta);

SlsqpResult solve(const NlpProblem& problem, const Vector& x0,
                  const SolverConfig& config = {});

}  // namespace magw
