#pragma once

#include "magw/nlp.hpp"
#include "magw/types.hpp"

namespace magw {

/// Extra linear restriction on the weights: coeffs^T w - rhs >= 0.
struct LinearInequality {
  Vector coeffs;
  double rhs = 0.0;
  std::string text;  // original source line, for diagnostics
};

/// Encodes model: min Q(w) s.t. sum w = 1, 0 <= w_j <= 1, plus any extra
/// inequalities. Constraint order: the simplex equality, then w_j >= 0,
/// then 1 - w_j >= 0, then the extras.
NlpProblem make_weight_problem(const ScoreMatrix& S,
                               std::vector<LinearInequality> extra = {});

}  // namespace magw
