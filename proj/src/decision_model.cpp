#include "magw/decision_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace magw {

namespace {

void check_no_duplicates(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw std::invalid_argument(std::string("duplicate ") + what + " labels");
}

}  // namespace

void ScorePanel::validate() const {
  if (alternatives.empty() || indicators.empty() || experts.empty())
    throw std::invalid_argument("panel must have at least one alternative, indicator and expert");
  check_no_duplicates(alternatives, "alternative");
  check_no_duplicates(indicators, "indicator");
  check_no_duplicates(experts, "expert");
  if (static_cast<Index>(scores.size()) != num_alternatives())
    throw std::invalid_argument("score block count does not match alternative count");
  for (const Matrix& block : scores) {
    if (block.rows() != num_indicators() || block.cols() != num_experts())
      throw std::invalid_argument("score block shape mismatch");
    if (!block.allFinite())
      throw std::invalid_argument("panel contains non-finite scores");
  }
}

double ScorePanel::min_score() const {
  double lo = scores.front().minCoeff();
  for (const Matrix& block : scores) lo = std::min(lo, block.minCoeff());
  return lo;
}

double ScorePanel::max_score() const {
  double hi = scores.front().maxCoeff();
  for (const Matrix& block : scores) hi = std::max(hi, block.maxCoeff());
  return hi;
}

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
  if (w_.size() == 0) throw std::invalid_argument("empty weight vector");
  if (!w_.allFinite()) throw std::invalid_argument("non-finite weight");
  if (w_.minCoeff() < -kSimplexTol || w_.maxCoeff() > 1.0 + kSimplexTol)
    throw std::invalid_argument("weight outside [0, 1]");
  if (std::abs(w_.sum() - 1.0) > kSimplexTol)
    throw std::invalid_argument("weights must sum to 1");
}

WeightVector WeightVector::uniform(Index m) {
  return WeightVector(Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

ScoreMatrix build_score_matrix(const ScorePanel& panel) {
  panel.validate();
  const Index s = panel.num_alternatives();
  const Index n = panel.num_indicators();
  const Index m = panel.num_experts();
  ScoreMatrix S;
  S.data.resize(n * s, m);
  S.block_size = n;
  S.num_alternatives = s;
  for (Index i = 0; i < s; ++i) S.data.middleRows(i * n, n) = panel.scores[i];
  return S;
}

ConsensusVector consensus_point(const ScoreMatrix& S, const WeightVector& w) {
  if (S.num_experts() != w.size())
    throw std::invalid_argument("expert count mismatch between matrix and weights");
  return ConsensusVector{S.data * w.values(), S.block_size};
}

DistanceReport distance_report(const ScoreMatrix& S, const WeightVector& w) {
  const ConsensusVector b = consensus_point(S, w);
  const Index s = S.num_alternatives;
  const Index m = S.num_experts();
  DistanceReport report;
  report.expert_distances.resize(m);
  report.per_alt_distances.resize(s, m);
  report.per_alt_totals.resize(s);
  for (Index j = 0; j < m; ++j)
    report.expert_distances[j] = (S.data.col(j) - b.values).norm();
  for (Index i = 0; i < s; ++i) {
    for (Index j = 0; j < m; ++j)
      report.per_alt_distances(i, j) = (S.block(i).col(j) - b.block(i)).norm();
    report.per_alt_totals[i] = report.per_alt_distances.row(i).sum();
  }
  report.objective = report.expert_distances.sum();
  return report;
}

double objective_value(const ScoreMatrix& S, const Vector& w) {
  if (S.num_experts() != w.size())
    throw std::invalid_argument("expert count mismatch between matrix and weights");
  const Vector b = S.data * w;
  double q = 0.0;
  for (Index j = 0; j < S.num_experts(); ++j) q += (S.data.col(j) - b).norm();
  return q;
}

Vector objective_gradient_value(const ScoreMatrix& S, const Vector& w,
                                double residual_guard) {
  if (S.num_experts() != w.size())
    throw std::invalid_argument("expert count mismatch between matrix and weights");
  const Vector b = S.data * w;
  Vector g = Vector::Zero(S.num_experts());
  for (Index j = 0; j < S.num_experts(); ++j) {
    const Vector r = S.data.col(j) - b;
    const double nr = r.norm();
    if (nr > residual_guard) g -= S.data.transpose() * (r / nr);
  }
  return g;
}

double objective(const ScoreMatrix& S, const WeightVector& w) {
  return objective_value(S, w.values());
}

Vector objective_gradient(const ScoreMatrix& S, const WeightVector& w,
                          double residual_guard) {
  return objective_gradient_value(S, w.values(), residual_guard);
}

double convexity_gap(const ScoreMatrix& S, const WeightVector& w,
                     const WeightVector& w2, double lambda) {
  if (lambda <= 0.0 || lambda >= 1.0)
    throw std::invalid_argument("lambda must lie in (0, 1)");
  const WeightVector mid(lambda * w.values() + (1.0 - lambda) * w2.values());
  return lambda * objective(S, w) + (1.0 - lambda) * objective(S, w2) -
         objective(S, mid);
}

RankDiagnostics rank_diagnostics(const ScoreMatrix& S, double rank_tolerance) {
  if (S.data.size() == 0) throw std::invalid_argument("empty score matrix");
  Eigen::JacobiSVD<Matrix> svd(S.data);
  RankDiagnostics diag;
  diag.singular_values = svd.singularValues();
  diag.rank_tolerance = rank_tolerance;
  const double threshold = rank_tolerance * diag.singular_values[0];
  diag.numerical_rank =
      (diag.singular_values.array() > threshold).count();
  diag.full_column_rank = diag.numerical_rank == S.num_experts();
  return diag;
}

}  // namespace magw
