#include "magw/slsqp.hpp"

#include <cmath>

namespace magw {

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::converged: return "converged";
    case TerminationReason::max_iterations: return "max_iterations";
    case TerminationReason::subproblem_infeasible: return "subproblem_infeasible";
    case TerminationReason::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

LdlFactors ldl_factorize(const Matrix& B) {
  const Index n = B.rows();
  if (B.cols() != n) throw std::invalid_argument("matrix not square");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + B.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("matrix not symmetric");
  LdlFactors f;
  f.L = Matrix::Identity(n, n);
  f.D = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    double dj = B(j, j);
    for (Index k = 0; k < j; ++k) dj -= f.L(j, k) * f.L(j, k) * f.D[k];
    if (dj <= 0.0) throw LdlPivotError("non-positive pivot in LDL^T factorization");
    f.D[j] = dj;
    for (Index i = j + 1; i < n; ++i) {
      double v = B(i, j);
      for (Index k = 0; k < j; ++k) v -= f.L(i, k) * f.L(j, k) * f.D[k];
      f.L(i, j) = v / dj;
    }
  }
  return f;
}

LseiInstance build_qp_subproblem(const IterationState& state, const NlpProblem& problem) {
  const Index n = problem.dimension;
  const LdlFactors f = ldl_factorize(state.B);
  const Vector sqrt_d = f.D.cwiseSqrt();

  LseiInstance inst;
  inst.design = sqrt_d.asDiagonal() * f.L.transpose();
  const Vector grad = problem.gradient(state.x);
  const Vector v = f.L.triangularView<Eigen::UnitLower>().solve(grad);
  inst.target = -(v.array() / sqrt_d.array()).matrix();

  const Index me = problem.num_equalities;
  const Index mc = problem.num_constraints();
  inst.eq_matrix.resize(me, n);
  inst.eq_rhs.resize(me);
  inst.ineq_matrix.resize(mc - me, n);
  inst.ineq_rhs.resize(mc - me);
  for (Index j = 0; j < mc; ++j) {
    const Vector cg = problem.constraints[static_cast<size_t>(j)].gradient(state.x);
    const double cv = problem.constraints[static_cast<size_t>(j)].value(state.x);
    // linearization: grad g^T d + g = 0 (eq) or >= 0 (ineq)
    if (j < me) {
      inst.eq_matrix.row(j) = cg.transpose();
      inst.eq_rhs[j] = -cv;
    } else {
      inst.ineq_matrix.row(j - me) = cg.transpose();
      inst.ineq_rhs[j - me] = -cv;
    }
  }
  return inst;
}

double merit_value(const NlpProblem& problem, const Vector& x, const Vector& rho) {
  double phi = problem.objective(x);
  for (Index j = 0; j < problem.num_constraints(); ++j) {
    const double g = problem.constraints[static_cast<size_t>(j)].value(x);
    if (j < problem.num_equalities)
      phi += rho[j] * std::abs(g);
    else
      phi += rho[j] * std::abs(std::min(0.0, g));
  }
  return phi;
}

Vector update_penalty(const Vector& rho_prev, const Vector& mu) {
  if (rho_prev.size() != mu.size())
    throw std::invalid_argument("penalty/multiplier length mismatch");
  return rho_prev.binaryExpr(mu, [](double r, double m) {
    return std::max(0.5 * (r + std::abs(m)), std::abs(m));
  });
}

double line_search(const NlpProblem& problem, const IterationState& state,
                   const Vector& d, const SolverConfig& config) {
  if (d.lpNorm<Eigen::Infinity>() <= 1e-15)
    throw std::invalid_argument("zero search direction");
  const double phi0 = merit_value(problem, state.x, state.rho);
  // directional derivative estimate of the exact penalty at alpha = 0
  double slope = problem.gradient(state.x).dot(d);
  for (Index j = 0; j < problem.num_constraints(); ++j) {
    const double g = problem.constraints[static_cast<size_t>(j)].value(state.x);
    if (j < problem.num_equalities)
      slope -= state.rho[j] * std::abs(g);
    else
      slope -= state.rho[j] * std::abs(std::min(0.0, g));
  }
  slope = std::min(slope, 0.0);

  double alpha = 1.0;
  for (int step = 0; step < config.line_search_max_steps; ++step) {
    const double phi = merit_value(problem, state.x + alpha * d, state.rho);
    if (std::isfinite(phi) &&
        phi <= phi0 + config.armijo_coefficient * alpha * slope &&
        (slope < 0.0 || phi < phi0))
      return alpha;
    alpha *= config.backtrack_factor;
  }
  return 0.0;
}

Matrix damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& eta) {
  const Index n = B.rows();
  if (s.norm() <= 0.0) throw std::invalid_argument("zero step in BFGS update");
  const Vector Bs = B * s;
  const double sBs = s.dot(Bs);
  if (!(sBs > 0.0)) return Matrix::Identity(n, n);
  const double sEta = s.dot(eta);
  double theta = 1.0;
  if (sEta < 0.2 * sBs) {
    const double denom = sBs - sEta;
    theta = denom > 0.0 ? 0.8 * sBs / denom : 1.0;
  }
  const Vector q = theta * eta + (1.0 - theta) * Bs;
  const double qs = q.dot(s);
  if (!(qs > 0.0)) return Matrix::Identity(n, n);
  Matrix next = B + (q * q.transpose()) / qs - (Bs * Bs.transpose()) / sBs;
  if (!next.allFinite()) return Matrix::Identity(n, n);
  next = 0.5 * (next + next.transpose());
  return next;
}

namespace {

Vector lagrangian_gradient(const NlpProblem& problem, const Vector& x, const Vector& mu) {
  Vector g = problem.gradient(x);
  for (Index j = 0; j < problem.num_constraints(); ++j)
    g -= mu[j] * problem.constraints[static_cast<size_t>(j)].gradient(x);
  return g;
}

struct KktEstimate {
  Vector mu;
  double residual = 0.0;
  double gradient_norm = 0.0;
  bool signs_ok = true;
};

// Estimate multipliers at x by least squares over the gradients of the
// equalities and active inequalities, then report the stationarity residual.
// The subproblem multipliers certify the QP (grad f + B d = A^T mu), not the
// point itself, so they are unusable when the step is still large.
KktEstimate estimate_kkt(const NlpProblem& problem, const Vector& x) {
  const Index mc = problem.num_constraints();
  std::vector<Index> active;
  for (Index j = 0; j < mc; ++j) {
    const double g = problem.constraints[static_cast<size_t>(j)].value(x);
    if (j < problem.num_equalities || g <= 1e-8) active.push_back(j);
  }
  KktEstimate est;
  est.mu = Vector::Zero(mc);
  const Vector grad = problem.gradient(x);
  est.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  if (active.empty()) {
    est.residual = grad.lpNorm<Eigen::Infinity>();
    return est;
  }
  Matrix At(problem.dimension, static_cast<Index>(active.size()));
  for (size_t k = 0; k < active.size(); ++k)
    At.col(static_cast<Index>(k)) =
        problem.constraints[static_cast<size_t>(active[k])].gradient(x);
  const Vector mu_act = At.colPivHouseholderQr().solve(grad);
  for (size_t k = 0; k < active.size(); ++k) {
    est.mu[active[k]] = mu_act[static_cast<Index>(k)];
    if (active[k] >= problem.num_equalities && mu_act[static_cast<Index>(k)] < -1e-6)
      est.signs_ok = false;
  }
  est.residual = (grad - At * mu_act).lpNorm<Eigen::Infinity>();
  return est;
}

bool feasible(const NlpProblem& problem, const Vector& x, double tol = 1e-8) {
  for (Index j = 0; j < problem.num_constraints(); ++j) {
    const double g = problem.constraints[static_cast<size_t>(j)].value(x);
    if (j < problem.num_equalities) {
      if (std::abs(g) > tol) return false;
    } else {
      if (g < -tol) return false;
    }
  }
  return true;
}

}  // namespace

SlsqpResult solve(const NlpProblem& problem, const Vector& x0, const SolverConfig& config) {
  const Index n = problem.dimension;
  if (x0.size() != n) throw std::invalid_argument("initial point dimension mismatch");
  const Index mc = problem.num_constraints();

  SlsqpResult result;
  Vector x = x0;
  Matrix B = Matrix::Identity(n, n);
  Vector rho = Vector::Zero(mc);
  Vector mu = Vector::Zero(mc);
  double f = problem.objective(x);
  if (!std::isfinite(f)) throw std::runtime_error("non-finite objective at the initial point");

  result.trace.records.push_back({x, f, 0.0, 0.0, merit_value(problem, x, rho), rho});
  result.trace.reason = TerminationReason::max_iterations;

  for (int k = 0; k < config.max_iterations; ++k) {
    IterationState state{x, B, rho, k, f, mu};
    LseiInstance inst;
    try {
      inst = build_qp_subproblem(state, problem);
    } catch (const LdlPivotError&) {
      B = Matrix::Identity(n, n);
      state.B = B;
      inst = build_qp_subproblem(state, problem);
    }

    LseiSolution sub;
    try {
      sub = solve_lsei(inst);
    } catch (const LseiInfeasible&) {
      // one relaxation pass: drop the positive inequality right-hand sides
      LseiInstance relaxed = inst;
      relaxed.ineq_rhs = relaxed.ineq_rhs.cwiseMin(0.0);
      try {
        sub = solve_lsei(relaxed);
      } catch (const std::runtime_error&) {
        result.trace.reason = TerminationReason::subproblem_infeasible;
        break;
      }
    } catch (const LseiRankDeficient&) {
      result.trace.reason = TerminationReason::subproblem_infeasible;
      break;
    }

    const Vector& d = sub.d;
    mu = sub.multipliers;
    const double d_norm = d.lpNorm<Eigen::Infinity>();
    if (d_norm <= std::sqrt(config.tolerance) && feasible(problem, x)) {
      const KktEstimate est = estimate_kkt(problem, x);
      if (est.residual <= config.kkt_tolerance * (1.0 + est.gradient_norm) && est.signs_ok) {
        mu = est.mu;
        result.trace.reason = TerminationReason::converged;
        break;
      }
    }
    if (d_norm <= 1e-15) {
      if (feasible(problem, x)) {
        result.trace.reason = TerminationReason::converged;
      } else {
        result.trace.reason = TerminationReason::line_search_failed;
      }
      break;
    }

    rho = update_penalty(rho, mu);
    state.rho = rho;
    const double alpha = line_search(problem, state, d, config);
    if (alpha == 0.0) {
      // the merit can no longer decrease; accept the iterate if it is already optimal
      result.trace.reason = TerminationReason::line_search_failed;
      if (feasible(problem, x)) {
        const KktEstimate est = estimate_kkt(problem, x);
        if (est.residual <= config.kkt_tolerance * (1.0 + est.gradient_norm) && est.signs_ok) {
          mu = est.mu;
          result.trace.reason = TerminationReason::converged;
        }
      }
      break;
    }

    const Vector x_next = x + alpha * d;
    const double f_next = problem.objective(x_next);
    const bool converged = std::abs(f_next - f) <= config.tolerance * (1.0 + std::abs(f)) &&
                           d_norm <= std::sqrt(config.tolerance) &&
                           feasible(problem, x_next) &&
                           lagrangian_gradient(problem, x_next, mu).lpNorm<Eigen::Infinity>() <=
                               config.kkt_tolerance;

    const Vector s = alpha * d;
    const Vector eta =
        lagrangian_gradient(problem, x_next, mu) - lagrangian_gradient(problem, x, mu);
    B = damped_bfgs_update(B, s, eta);

    x = x_next;
    f = f_next;
    result.trace.records.push_back({x, f, d_norm, alpha, merit_value(problem, x, rho), rho});

    if (converged) {
      result.trace.reason = TerminationReason::converged;
      break;
    }
  }

  if (result.trace.reason == TerminationReason::converged && mc > 0)
    mu = estimate_kkt(problem, x).mu;

  result.x = x;
  result.multipliers = mu;
  return result;
}

}  // namespace magw
