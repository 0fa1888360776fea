#include "magw/expert_weights.hpp"

#include "magw/decision_model.hpp"

#include <memory>

namespace magw {

NlpProblem make_weight_problem(const ScoreMatrix& S, std::vector<LinearInequality> extra) {
  const Index m = S.num_experts();
  auto shared = std::make_shared<const ScoreMatrix>(S);

  NlpProblem problem;
  problem.dimension = m;
  problem.objective = [shared](const Vector& w) { return objective_value(*shared, w); };
  problem.gradient = [shared](const Vector& w) { return objective_gradient_value(*shared, w); };

  // sum w - 1 = 0
  problem.constraints.push_back(
      {[](const Vector& w) { return w.sum() - 1.0; },
       [m](const Vector&) { return Vector::Ones(m).eval(); }});
  problem.num_equalities = 1;

  for (Index j = 0; j < m; ++j) {
    problem.constraints.push_back(
        {[j](const Vector& w) { return w[j]; },
         [j, m](const Vector&) { return Vector::Unit(m, j).eval(); }});
  }
  // w_j <= 1 is implied by the other constraints; kept to mirror the model
  for (Index j = 0; j < m; ++j) {
    problem.constraints.push_back(
        {[j](const Vector& w) { return 1.0 - w[j]; },
         [j, m](const Vector&) { return (-Vector::Unit(m, j)).eval(); }});
  }
  for (auto& c : extra) {
    if (c.coeffs.size() != m)
      throw std::invalid_argument("extra constraint dimension mismatch");
    auto coeffs = std::make_shared<const Vector>(std::move(c.coeffs));
    const double rhs = c.rhs;
    problem.constraints.push_back(
        {[coeffs, rhs](const Vector& w) { return coeffs->dot(w) - rhs; },
         [coeffs](const Vector&) { return *coeffs; }});
  }
  return problem;
}

}  // namespace magw
