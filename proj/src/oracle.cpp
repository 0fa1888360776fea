#include "magw/oracle.hpp"

#include "magw/decision_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace magw {

double SimplexGrid::point_count() const {
  // C(resolution + dimension - 1, dimension - 1)
  double count = 1.0;
  for (Index i = 1; i < dimension; ++i)
    count *= static_cast<double>(resolution + i) / static_cast<double>(i);
  return count;
}

namespace {

void enumerate_grid(const ScoreMatrix& S, int remaining, Index coord, Vector& point,
                    double scale, Vector& best, double& best_q) {
  const Index m = point.size();
  if (coord == m - 1) {
    point[coord] = remaining * scale;
    const double q = objective_value(S, point);
    if (q < best_q) {
      best_q = q;
      best = point;
    }
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    point[coord] = k * scale;
    enumerate_grid(S, remaining - k, coord + 1, point, scale, best, best_q);
  }
}

}  // namespace

BruteForceResult brute_force_minimize(const ScoreMatrix& S, const SimplexGrid& grid) {
  if (grid.resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  if (grid.dimension != S.num_experts())
    throw std::invalid_argument("grid dimension mismatch");
  if (grid.point_count() > 1e7) throw std::invalid_argument("simplex grid too large");

  Vector point = Vector::Zero(grid.dimension);
  Vector best = Vector::Zero(grid.dimension);
  double best_q = std::numeric_limits<double>::infinity();
  enumerate_grid(S, grid.resolution, 0, point, 1.0 / grid.resolution, best, best_q);
  // snap away accumulated rounding before the simplex check
  best /= best.sum();
  return {WeightVector(best), best_q};
}

Vector project_to_simplex(const Vector& v) {
  const Index m = v.size();
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < m; ++k) {
    cumsum += u[static_cast<size_t>(k)];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<size_t>(k)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

WeightVector projected_subgradient_minimize(const ScoreMatrix& S, int steps,
                                            double step_scale) {
  const Index m = S.num_experts();
  Vector w = Vector::Constant(m, 1.0 / static_cast<double>(m));
  if (step_scale <= 0.0)
    step_scale = 1.0 / std::max(1.0, objective_gradient_value(S, w).norm());
  Vector best = w;
  double best_q = objective_value(S, w);
  for (int k = 1; k <= steps; ++k) {
    const Vector g = objective_gradient_value(S, w);
    w = project_to_simplex(w - (step_scale / std::sqrt(static_cast<double>(k))) * g);
    const double q = objective_value(S, w);
    if (q < best_q) {
      best_q = q;
      best = w;
    }
  }
  return WeightVector(best / best.sum());
}

Vector finite_difference_gradient(const ScoreMatrix& S, const WeightVector& w, double h) {
  if (h <= 0.0) throw std::invalid_argument("step must be positive");
  const Index m = w.size();
  Vector g(m);
  for (Index j = 0; j < m; ++j) {
    const Vector e = Vector::Unit(m, j);
    g[j] = (objective_value(S, w.values() + h * e) -
            objective_value(S, w.values() - h * e)) /
           (2.0 * h);
  }
  return g;
}

namespace {

// Quantize before sorting so that values differing only by floating-point
// noise count as ties (and fall back to the index order). Quantization keeps
// the comparison transitive, unlike a tolerance inside the comparator.
std::vector<long long> tie_keys(const Vector& values) {
  const double tol = 1e-9 * (1.0 + values.cwiseAbs().maxCoeff());
  std::vector<long long> keys(static_cast<size_t>(values.size()));
  for (Index i = 0; i < values.size(); ++i)
    keys[static_cast<size_t>(i)] = static_cast<long long>(std::llround(values[i] / tol));
  return keys;
}

}  // namespace

OrderConsistency order_consistency_check(const WeightVector& weights,
                                         const Vector& distances) {
  const Index m = weights.size();
  if (distances.size() != m) throw std::invalid_argument("length mismatch");
  OrderConsistency result;
  result.weight_order.resize(static_cast<size_t>(m));
  result.distance_order.resize(static_cast<size_t>(m));
  std::iota(result.weight_order.begin(), result.weight_order.end(), Index{0});
  std::iota(result.distance_order.begin(), result.distance_order.end(), Index{0});
  const std::vector<long long> wkeys = tie_keys(weights.values());
  const std::vector<long long> dkeys = tie_keys(distances);
  std::stable_sort(result.weight_order.begin(), result.weight_order.end(),
                   [&](Index a, Index b) {
                     return wkeys[static_cast<size_t>(a)] > wkeys[static_cast<size_t>(b)];
                   });
  std::stable_sort(result.distance_order.begin(), result.distance_order.end(),
                   [&](Index a, Index b) {
                     return dkeys[static_cast<size_t>(a)] < dkeys[static_cast<size_t>(b)];
                   });
  result.consistent = result.weight_order == result.distance_order;
  return result;
}

}  // namespace magw
