#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace magw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raw evaluation data: s alternatives x n indicators x m experts.
/// scores[i] is the n x m block of alternative i (rows = indicators,
/// columns = experts).
struct ScorePanel {
  std::vector<std::string> alternatives;
  std::vector<std::string> indicators;
  std::vector<std::string> experts;
  std::vector<Matrix> scores;

  Index num_alternatives() const { return static_cast<Index>(alternatives.size()); }
  Index num_indicators() const { return static_cast<Index>(indicators.size()); }
  Index num_experts() const { return static_cast<Index>(experts.size()); }

  /// Throws std::invalid_argument on empty dimensions, duplicate labels,
  /// mismatched block shapes or non-finite cells.
  void validate() const;

  double min_score() const;
  double max_score() const;
};

/// The ns x m stacked block matrix. Column j is expert j's scores across
/// all alternatives, alternative-major and indicator-minor.
struct ScoreMatrix {
  Matrix data;
  Index block_size = 0;        // indicators per alternative block
  Index num_alternatives = 0;

  Index num_experts() const { return data.cols(); }
  Index rows() const { return data.rows(); }

  /// Rows of alternative i (the block A^i).
  auto block(Index i) const { return data.middleRows(i * block_size, block_size); }
};

/// Simplex-constrained weight vector: entries in [0,1] summing to 1.
class WeightVector {
 public:
  static constexpr double kSimplexTol = 1e-10;

  explicit WeightVector(Vector w);
  static WeightVector uniform(Index m);

  const Vector& values() const { return w_; }
  Index size() const { return w_.size(); }
  double operator[](Index j) const { return w_[j]; }

 private:
  Vector w_;
};

/// Consensus score point b = S w with per-alternative block access.
struct ConsensusVector {
  Vector values;
  Index block_size = 0;

  auto block(Index i) const { return values.segment(i * block_size, block_size); }
  Index num_alternatives() const { return values.size() / block_size; }
};

struct DistanceReport {
  Vector expert_distances;   // s_j, length m
  Matrix per_alt_distances;  // d_ij, s x m
  Vector per_alt_totals;     // D_i, length s
  double objective = 0.0;    // Q = sum_j s_j
};

struct RankDiagnostics {
  Index numerical_rank = 0;
  bool full_column_rank = false;
  Vector singular_values;
  double rank_tolerance = 0.0;
};

}  // namespace magw
