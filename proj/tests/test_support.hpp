#pragma once

#include "magw/decision_model.hpp"
#include "magw/panel_io.hpp"
#include "magw/types.hpp"

#include <random>

namespace magw::testing {

inline ScorePanel load_table1() { return load_panel(std::string(MAGW_DATA_DIR) + "/table1.csv"); }

/// Scores uniform on [40, 99], matching the bundled dataset's range.
inline ScorePanel random_panel(Index s, Index n, Index m, std::mt19937& rng) {
  std::uniform_real_distribution<double> score(40.0, 99.0);
  ScorePanel panel;
  for (Index i = 0; i < s; ++i) panel.alternatives.push_back("d" + std::to_string(i + 1));
  for (Index k = 0; k < n; ++k) panel.indicators.push_back("u" + std::to_string(k + 1));
  for (Index j = 0; j < m; ++j) panel.experts.push_back("c" + std::to_string(j + 1));
  for (Index i = 0; i < s; ++i) {
    Matrix block(n, m);
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < m; ++j) block(k, j) = score(rng);
    panel.scores.push_back(std::move(block));
  }
  return panel;
}

inline ScoreMatrix random_score_matrix(Index rows, Index m, std::mt19937& rng,
                                       Index block_size = 0) {
  std::uniform_real_distribution<double> score(40.0, 99.0);
  ScoreMatrix S;
  S.block_size = block_size > 0 ? block_size : rows;
  S.num_alternatives = rows / S.block_size;
  S.data.resize(rows, m);
  for (Index r = 0; r < rows; ++r)
    for (Index j = 0; j < m; ++j) S.data(r, j) = score(rng);
  return S;
}

inline WeightVector random_simplex_point(Index m, std::mt19937& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector w(m);
  for (Index j = 0; j < m; ++j) w[j] = expo(rng) + 1e-9;
  return WeightVector(Vector(w / w.sum()));
}

}  // namespace magw::testing
