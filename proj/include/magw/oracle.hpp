#pragma once

#include "magw/types.hpp"

namespace magw {

/// Weight vectors whose entries are multiples of 1/resolution.
struct SimplexGrid {
  int resolution = 100;
  Index dimension = 0;

  /// Number of grid points, C(resolution + dimension - 1, dimension - 1).
  double point_count() const;
};

struct BruteForceResult {
  WeightVector weights;
  double objective = 0.0;
};

/// Exhaustive enumeration of the simplex grid. Ties keep the first point in
/// enumeration order, which puts mass on the lowest-index expert.
BruteForceResult brute_force_minimize(const ScoreMatrix& S, const SimplexGrid& grid);

/// Euclidean projection onto { w : w >= 0, sum w = 1 } (sort-based).
Vector project_to_simplex(const Vector& v);

/// Projected subgradient descent with a 1/sqrt(k) diminishing step and
/// best-iterate tracking. step_scale <= 0 picks 1/max(1, ||g_0||).
WeightVector projected_subgradient_minimize(const ScoreMatrix& S, int steps,
                                            double step_scale = 0.0);

/// Central differences of Q around w.
Vector finite_difference_gradient(const ScoreMatrix& S, const WeightVector& w, double h);

struct OrderConsistency {
  bool consistent = false;
  std::vector<Index> weight_order;    // expert indices, weights descending
  std::vector<Index> distance_order;  // expert indices, distances ascending
};

/// Checks that descending weights and ascending distances order the experts
/// identically. Values within a small relative tolerance count as ties,
/// which are broken by expert index.
OrderConsistency order_consistency_check(const WeightVector& weights,
                                         const Vector& distances);

}  // namespace magw
