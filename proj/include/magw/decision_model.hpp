#pragma once

#include "magw/types.hpp"

namespace magw {

/// Stacks the per-alternative blocks A^1..A^s into the ns x m matrix S.
ScoreMatrix build_score_matrix(const ScorePanel& panel);

/// b = S w; block i equals A^i w.
ConsensusVector consensus_point(const ScoreMatrix& S, const WeightVector& w);

/// Distances of each expert column to the consensus point, per alternative
/// and overall, plus the objective Q(w).
DistanceReport distance_report(const ScoreMatrix& S, const WeightVector& w);

/// Q(w) = sum_j ||p_j - S w||_2.
double objective(const ScoreMatrix& S, const WeightVector& w);

/// Gradient of Q. Residuals with norm below the guard contribute zero
/// (a valid subgradient element at the non-smooth points).
Vector objective_gradient(const ScoreMatrix& S, const WeightVector& w,
                          double residual_guard = 1e-12);

/// Q and its gradient evaluated at an arbitrary point (Q is defined for any
/// real w, not only on the simplex).
double objective_value(const ScoreMatrix& S, const Vector& w);
Vector objective_gradient_value(const ScoreMatrix& S, const Vector& w,
                                double residual_guard = 1e-12);

/// T(lambda; w, w') = lambda Q(w) + (1-lambda) Q(w') - Q(lambda w + (1-lambda) w').
/// Nonnegative by convexity; strictly positive for distinct w, w' when S has
/// full column rank.
double convexity_gap(const ScoreMatrix& S, const WeightVector& w,
                     const WeightVector& w2, double lambda);

/// Numerical rank of S via singular values; a column count rank means the
/// optimal weights are unique.
RankDiagnostics rank_diagnostics(const ScoreMatrix& S, double rank_tolerance = 1e-10);

}  // namespace magw
