#pragma once

#include "magw/expert_weights.hpp"
#include "magw/nlp.hpp"
#include "magw/types.hpp"

#include <optional>

namespace magw {

/// The feasible region (simplex plus extra constraints) is empty.
struct InfeasibleModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
  double log_objective = 0.0;
  double step_size = 0.0;
  double merit = 0.0;
};

struct ResultDocument {
  std::vector<std::string> experts;
  std::vector<std::string> alternatives;
  Vector weights;
  Vector distances;          // s_j per expert
  Matrix per_alt_distances;  // d_ij
  Vector per_alt_totals;     // D_i
  double objective = 0.0;
  RankDiagnostics rank;
  int iterations = 0;
  TerminationReason termination = TerminationReason::converged;
  std::vector<TracePoint> trace;
  std::vector<std::string> warnings;
};

/// Full solve workflow: rank diagnostics, feasibility pre-check, SLSQP run,
/// distance report. Throws InfeasibleModel when the constraints leave no
/// feasible weights.
ResultDocument run_solve(const ScorePanel& panel, const SolverConfig& config = {},
                         const std::optional<Vector>& initial_weights = {},
                         std::vector<LinearInequality> extra_constraints = {});

std::string result_to_json(const ResultDocument& doc);
ResultDocument result_from_json(const std::string& json_text);
std::string result_to_csv(const ResultDocument& doc);

/// Human-readable summary (weights and distances rounded to 3 decimals).
std::string render_report(const ResultDocument& doc);

/// Per-iteration trace as CSV (k, Q, ln Q, alpha, merit).
std::string trace_to_csv(const ResultDocument& doc);

}  // namespace magw
