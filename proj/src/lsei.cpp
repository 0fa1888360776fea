#include "magw/lsei.hpp"

#include <algorithm>
#include <cmath>

namespace magw {

Vector nnls(const Matrix& A, const Vector& y, int max_exchanges) {
  const Index n = A.cols();
  if (max_exchanges <= 0) max_exchanges = 10 * static_cast<int>(n + A.rows()) + 50;
  Vector u = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  Vector residual = y;
  const double dual_tol = 1e-11 * std::max(1.0, (A.transpose() * y).cwiseAbs().maxCoeff());

  auto solve_passive = [&](const std::vector<Index>& idx) {
    Matrix Ap(A.rows(), static_cast<Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Index>(c)) = A.col(idx[c]);
    return Ap.colPivHouseholderQr().solve(y).eval();
  };

  for (int iter = 0; iter < max_exchanges; ++iter) {
    const Vector w = A.transpose() * residual;
    // smallest-index entering rule
    Index enter = -1;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > dual_tol) { enter = j; break; }
    }
    if (enter < 0) break;
    passive[enter] = true;

    for (int inner = 0; inner < max_exchanges; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      const Vector z = solve_passive(idx);
      bool all_positive = true;
      for (Index c = 0; c < z.size(); ++c)
        if (z[c] <= 0.0) { all_positive = false; break; }
      if (all_positive) {
        u.setZero();
        for (size_t c = 0; c < idx.size(); ++c) u[idx[c]] = z[static_cast<Index>(c)];
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < idx.size(); ++c) {
        const double zc = z[static_cast<Index>(c)];
        if (zc <= 0.0) {
          const double uc = u[idx[c]];
          alpha = std::min(alpha, uc / (uc - zc));
        }
      }
      for (size_t c = 0; c < idx.size(); ++c) {
        const Index j = idx[c];
        u[j] += alpha * (z[static_cast<Index>(c)] - u[j]);
        if (u[j] <= 1e-14) { u[j] = 0.0; passive[j] = false; }
      }
    }
    residual = y - A * u;
  }
  return u;
}

namespace {

// Least-squares recovery of the multipliers from the stationarity condition
// E^T (E d - f) = A_eq^T mu_eq + A_act^T mu_act.
void recover_multipliers(const LseiInstance& inst, LseiSolution& sol) {
  const Index n = inst.dimension();
  const Index p = inst.eq_matrix.rows();
  const Index a = static_cast<Index>(sol.active_set.size());
  sol.multipliers = Vector::Zero(p + inst.ineq_matrix.rows());
  if (p + a == 0) return;
  Matrix C(n, p + a);
  for (Index i = 0; i < p; ++i) C.col(i) = inst.eq_matrix.row(i).transpose();
  for (Index c = 0; c < a; ++c)
    C.col(p + c) = inst.ineq_matrix.row(sol.active_set[static_cast<size_t>(c)]).transpose();
  const Vector g = inst.design.transpose() * (inst.design * sol.d - inst.target);
  const Vector xi = C.colPivHouseholderQr().solve(g);
  for (Index i = 0; i < p; ++i) sol.multipliers[i] = xi[i];
  for (Index c = 0; c < a; ++c)
    sol.multipliers[p + sol.active_set[static_cast<size_t>(c)]] = std::max(0.0, xi[p + c]);
}

std::vector<Index> tight_inequalities(const LseiInstance& inst, const Vector& d,
                                      const Vector& u) {
  std::vector<Index> active;
  const double tol = 1e-8 * (1.0 + d.norm());
  for (Index j = 0; j < inst.ineq_matrix.rows(); ++j) {
    const double slack = inst.ineq_matrix.row(j).dot(d) - inst.ineq_rhs[j];
    if (u[j] > 0.0 || std::abs(slack) <= tol) active.push_back(j);
  }
  return active;
}

}  // namespace

LseiSolution solve_lsei(const LseiInstance& inst) {
  const Index n = inst.dimension();
  if (inst.eq_matrix.rows() > 0 && inst.eq_matrix.cols() != n)
    throw std::invalid_argument("equality matrix column mismatch");
  if (inst.ineq_matrix.rows() > 0 && inst.ineq_matrix.cols() != n)
    throw std::invalid_argument("inequality matrix column mismatch");

  const Index p = inst.eq_matrix.rows();
  const Index mi = inst.ineq_matrix.rows();

  // Equality elimination: d = d_part + Z y with Z spanning null(A_eq).
  Vector d_part = Vector::Zero(n);
  Matrix Z = Matrix::Identity(n, n);
  if (p > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(inst.eq_matrix);
    qr.setThreshold(1e-12);
    const Index rank = qr.rank();
    d_part = qr.solve(inst.eq_rhs);
    const double eq_residual = (inst.eq_matrix * d_part - inst.eq_rhs).norm();
    if (eq_residual > 1e-9 * (1.0 + inst.eq_rhs.norm()))
      throw LseiInfeasible("inconsistent equality constraints");
    Eigen::ColPivHouseholderQR<Matrix> qrt(inst.eq_matrix.transpose());
    qrt.setThreshold(1e-12);
    const Matrix Qfull = qrt.householderQ();
    Z = Qfull.rightCols(n - rank);
  }
  const Index q = Z.cols();

  LseiSolution sol;
  Vector u = Vector::Zero(mi);  // inequality dual from the NNLS pass

  if (q == 0) {
    // fully determined by the equalities
    sol.d = d_part;
  } else {
    const Matrix Ez = inst.design * Z;
    const Vector fz = inst.target - inst.design * d_part;
    Eigen::ColPivHouseholderQR<Matrix> qr_e(Ez);
    qr_e.setThreshold(1e-12);
    if (qr_e.rank() < q)
      throw LseiRankDeficient("design matrix rank deficient on the equality null space");

    if (mi == 0) {
      sol.d = d_part + Z * qr_e.solve(fz);
    } else {
      // LSI -> LDP reduction via the thin QR of the reduced design.
      Eigen::HouseholderQR<Matrix> qr(Ez);
      const Matrix R = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
      const Vector Qtf = (qr.householderQ().transpose() * fz).head(q);
      const Matrix Gz = inst.ineq_matrix * Z;
      // Gt = Gz R^{-1}
      Matrix Gt = R.transpose().triangularView<Eigen::Lower>().solve(Gz.transpose()).transpose();
      const Vector ht = (inst.ineq_rhs - inst.ineq_matrix * d_part) - Gt * Qtf;

      Matrix Ahat(q + 1, mi);
      Ahat.topRows(q) = Gt.transpose();
      Ahat.row(q) = ht.transpose();
      Vector bhat = Vector::Zero(q + 1);
      bhat[q] = 1.0;
      u = nnls(Ahat, bhat);
      const Vector rhat = Ahat * u - bhat;
      if (rhat.norm() <= 1e-10 || rhat[q] >= -1e-12)
        throw LseiInfeasible("inequality constraints infeasible");
      const Vector z = -rhat.head(q) / rhat[q];
      sol.d = d_part + Z * (R.triangularView<Eigen::Upper>().solve(z + Qtf));
    }
  }

  if (mi > 0) {
    const Vector slack = inst.ineq_matrix * sol.d - inst.ineq_rhs;
    if (slack.minCoeff() < -1e-7 * (1.0 + sol.d.norm()))
      throw LseiInfeasible("inequality constraints infeasible at the reduced solution");
    sol.active_set = tight_inequalities(inst, sol.d, u);
  }
  recover_multipliers(inst, sol);
  return sol;
}

}  // namespace magw
