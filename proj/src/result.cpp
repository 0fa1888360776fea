#include "magw/result.hpp"

#include "magw/decision_model.hpp"
#include "magw/lsei.hpp"
#include "magw/slsqp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace magw {

using json = nlohmann::ordered_json;

namespace {

// Feasibility pre-check: least-distance projection of the uniform point onto
// the constraint polytope. Detects an empty feasible set before iterating
// and provides a feasible start when the caller's one is not usable.
Vector project_onto_feasible_set(const NlpProblem& problem, const Vector& reference) {
  const Index m = problem.dimension;
  LseiInstance inst;
  inst.design = Matrix::Identity(m, m);
  inst.target = reference;
  inst.eq_matrix.resize(problem.num_equalities, m);
  inst.eq_rhs.resize(problem.num_equalities);
  const Index mi = problem.num_constraints() - problem.num_equalities;
  inst.ineq_matrix.resize(mi, m);
  inst.ineq_rhs.resize(mi);
  const Vector zero = Vector::Zero(m);
  for (Index j = 0; j < problem.num_constraints(); ++j) {
    const auto& c = problem.constraints[static_cast<size_t>(j)];
    const Vector g = c.gradient(zero);
    const double offset = c.value(zero);  // linear constraints: g(w) = grad^T w + offset
    if (j < problem.num_equalities) {
      inst.eq_matrix.row(j) = g.transpose();
      inst.eq_rhs[j] = -offset;
    } else {
      inst.ineq_matrix.row(j - problem.num_equalities) = g.transpose();
      inst.ineq_rhs[j - problem.num_equalities] = -offset;
    }
  }
  try {
    return solve_lsei(inst).d;
  } catch (const LseiInfeasible&) {
    throw InfeasibleModel("constraints admit no feasible weight vector");
  }
}

}  // namespace

ResultDocument run_solve(const ScorePanel& panel, const SolverConfig& config,
                         const std::optional<Vector>& initial_weights,
                         std::vector<LinearInequality> extra_constraints) {
  panel.validate();
  const ScoreMatrix S = build_score_matrix(panel);
  const Index m = S.num_experts();

  ResultDocument doc;
  doc.experts = panel.experts;
  doc.alternatives = panel.alternatives;
  if (panel.min_score() < 0.0)
    doc.warnings.push_back("panel contains negative scores");

  doc.rank = rank_diagnostics(S);
  if (!doc.rank.full_column_rank)
    doc.warnings.push_back(
        "score matrix does not have full column rank; optimal weights may not be unique");

  const NlpProblem problem = make_weight_problem(S, std::move(extra_constraints));

  Vector x0 = initial_weights.value_or(Vector::Constant(m, 1.0 / static_cast<double>(m)));
  if (x0.size() != m) throw std::invalid_argument("initial weights length mismatch");
  // rejects runs whose extra constraints empty the simplex; also repairs an
  // initial point that violates them
  const Vector feasible_start = project_onto_feasible_set(problem, x0);
  if ((feasible_start - x0).lpNorm<Eigen::Infinity>() > 1e-9) x0 = feasible_start;

  const SlsqpResult solved = solve(problem, x0, config);
  doc.termination = solved.trace.reason;
  doc.iterations = solved.trace.iterations();
  for (const auto& rec : solved.trace.records) {
    TracePoint point;
    point.iteration = static_cast<int>(doc.trace.size());
    point.objective = rec.f_value;
    point.log_objective = std::log(rec.f_value);
    point.step_size = rec.step_size;
    point.merit = rec.merit;
    doc.trace.push_back(point);
  }

  // solver feasibility tolerance is looser than the WeightVector invariant
  Vector snapped = solved.x.cwiseMax(0.0);
  snapped /= snapped.sum();
  const WeightVector w(snapped);
  doc.weights = w.values();
  const DistanceReport report = distance_report(S, w);
  doc.distances = report.expert_distances;
  doc.per_alt_distances = report.per_alt_distances;
  doc.per_alt_totals = report.per_alt_totals;
  doc.objective = report.objective;
  return doc;
}

std::string result_to_json(const ResultDocument& doc) {
  json j;
  json weights = json::object();
  json distances = json::object();
  for (size_t k = 0; k < doc.experts.size(); ++k) {
    weights[doc.experts[k]] = doc.weights[static_cast<Index>(k)];
    distances[doc.experts[k]] = doc.distances[static_cast<Index>(k)];
  }
  j["weights"] = weights;
  j["distances"] = distances;

  json per_alt = json::object();
  for (size_t i = 0; i < doc.alternatives.size(); ++i) {
    json entry;
    json dists = json::object();
    for (size_t k = 0; k < doc.experts.size(); ++k)
      dists[doc.experts[k]] = doc.per_alt_distances(static_cast<Index>(i), static_cast<Index>(k));
    entry["distances"] = dists;
    entry["total"] = doc.per_alt_totals[static_cast<Index>(i)];
    per_alt[doc.alternatives[i]] = entry;
  }
  j["per_alternative"] = per_alt;
  j["objective"] = doc.objective;

  json diag;
  diag["numerical_rank"] = doc.rank.numerical_rank;
  diag["full_column_rank"] = doc.rank.full_column_rank;
  diag["singular_values"] = std::vector<double>(
      doc.rank.singular_values.data(),
      doc.rank.singular_values.data() + doc.rank.singular_values.size());
  diag["rank_tolerance"] = doc.rank.rank_tolerance;
  diag["iterations"] = doc.iterations;
  diag["termination"] = to_string(doc.termination);
  diag["warnings"] = doc.warnings;
  j["diagnostics"] = diag;

  json trace = json::array();
  for (const auto& p : doc.trace) {
    trace.push_back({{"k", p.iteration},
                     {"Q", p.objective},
                     {"ln_Q", p.log_objective},
                     {"alpha", p.step_size},
                     {"merit", p.merit}});
  }
  j["trace"] = trace;
  return j.dump(2) + "\n";
}

ResultDocument result_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  ResultDocument doc;
  for (const auto& [label, value] : j.at("weights").items()) {
    doc.experts.push_back(label);
    doc.weights.conservativeResize(doc.weights.size() + 1);
    doc.weights[doc.weights.size() - 1] = value.get<double>();
  }
  doc.distances.resize(static_cast<Index>(doc.experts.size()));
  for (Index k = 0; k < doc.distances.size(); ++k)
    doc.distances[k] = j.at("distances").at(doc.experts[static_cast<size_t>(k)]).get<double>();

  const auto& per_alt = j.at("per_alternative");
  doc.per_alt_distances.resize(static_cast<Index>(per_alt.size()),
                               static_cast<Index>(doc.experts.size()));
  doc.per_alt_totals.resize(static_cast<Index>(per_alt.size()));
  Index i = 0;
  for (const auto& [alt, entry] : per_alt.items()) {
    doc.alternatives.push_back(alt);
    for (size_t k = 0; k < doc.experts.size(); ++k)
      doc.per_alt_distances(i, static_cast<Index>(k)) =
          entry.at("distances").at(doc.experts[k]).get<double>();
    doc.per_alt_totals[i] = entry.at("total").get<double>();
    ++i;
  }
  doc.objective = j.at("objective").get<double>();

  const auto& diag = j.at("diagnostics");
  doc.rank.numerical_rank = diag.at("numerical_rank").get<Index>();
  doc.rank.full_column_rank = diag.at("full_column_rank").get<bool>();
  const auto sv = diag.at("singular_values").get<std::vector<double>>();
  doc.rank.singular_values = Eigen::Map<const Vector>(sv.data(), static_cast<Index>(sv.size()));
  doc.rank.rank_tolerance = diag.at("rank_tolerance").get<double>();
  doc.iterations = diag.at("iterations").get<int>();
  const std::string term = diag.at("termination").get<std::string>();
  for (auto reason : {TerminationReason::converged, TerminationReason::max_iterations,
                      TerminationReason::subproblem_infeasible,
                      TerminationReason::line_search_failed})
    if (term == to_string(reason)) doc.termination = reason;
  doc.warnings = diag.at("warnings").get<std::vector<std::string>>();

  for (const auto& p : j.at("trace")) {
    doc.trace.push_back({p.at("k").get<int>(), p.at("Q").get<double>(),
                         p.at("ln_Q").get<double>(), p.at("alpha").get<double>(),
                         p.at("merit").get<double>()});
  }
  return doc;
}

std::string result_to_csv(const ResultDocument& doc) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "expert,weight,distance\n";
  for (size_t k = 0; k < doc.experts.size(); ++k)
    out << doc.experts[k] << ',' << doc.weights[static_cast<Index>(k)] << ','
        << doc.distances[static_cast<Index>(k)] << '\n';
  return out.str();
}

std::string render_report(const ResultDocument& doc) {
  std::ostringstream out;
  out << "Expert weights and distances to the overall consistent score point\n";
  out << std::left << std::setw(12) << "expert" << std::setw(12) << "weight"
      << std::setw(12) << "distance" << "\n";
  out << std::fixed;
  for (size_t k = 0; k < doc.experts.size(); ++k) {
    out << std::left << std::setw(12) << doc.experts[k] << std::setprecision(3)
        << std::setw(12) << doc.weights[static_cast<Index>(k)] << std::setprecision(3)
        << std::setw(12) << doc.distances[static_cast<Index>(k)] << "\n";
  }
  out << std::setprecision(3) << "objective Q = " << doc.objective << "\n";
  out << "iterations  = " << doc.iterations << " (" << to_string(doc.termination) << ")\n";
  if (!doc.rank.full_column_rank)
    out << "warning: score matrix is column rank deficient; weights may not be unique\n";
  for (const auto& w : doc.warnings) out << "note: " << w << "\n";
  return out.str();
}

std::string trace_to_csv(const ResultDocument& doc) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "k,Q,ln_Q,alpha,merit\n";
  for (const auto& p : doc.trace)
    out << p.iteration << ',' << p.objective << ',' << p.log_objective << ','
        << p.step_size << ',' << p.merit << '\n';
  return out.str();
}

}  // namespace magw
