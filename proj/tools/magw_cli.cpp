#include "magw/constraints.hpp"
#include "magw/decision_model.hpp"
#include "magw/oracle.hpp"
#include "magw/panel_io.hpp"
#include "magw/result.hpp"
#include "magw/slsqp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNoConvergence = 4;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw magw::ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<magw::Vector> parse_init(const std::string& init) {
  if (init.empty() || init == "uniform") return std::nullopt;
  std::vector<double> values;
  std::stringstream ss(init);
  std::string field;
  while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
  return Eigen::Map<const magw::Vector>(values.data(),
                                        static_cast<magw::Index>(values.size())).eval();
}

int run_solve_command(const std::string& input, double tol, int max_iter,
                      const std::string& init, const std::string& constraints_path,
                      double strict_margin, const std::string& out_path,
                      const std::string& trace_path) {
  const magw::ScorePanel panel = magw::load_panel(input);

  std::vector<magw::LinearInequality> extra;
  if (!constraints_path.empty())
    extra = magw::parse_constraints(read_file(constraints_path), panel.experts, strict_margin);

  magw::SolverConfig config;
  config.tolerance = tol;
  config.max_iterations = max_iter;
  const magw::ResultDocument doc =
      magw::run_solve(panel, config, parse_init(init), std::move(extra));

  if (doc.termination == magw::TerminationReason::subproblem_infeasible) {
    std::cerr << "error: constraint set is infeasible\n";
    return kExitInfeasible;
  }
  if (doc.termination != magw::TerminationReason::converged) {
    std::cerr << "error: solver did not converge (" << magw::to_string(doc.termination)
              << " after " << doc.iterations << " iterations)\n";
    return kExitNoConvergence;
  }

  const bool csv = out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv";
  const std::string rendered = csv ? magw::result_to_csv(doc) : magw::result_to_json(doc);
  if (out_path.empty())
    std::cout << rendered;
  else
    write_file(out_path, rendered);
  if (!trace_path.empty()) write_file(trace_path, magw::trace_to_csv(doc));
  return 0;
}

int run_verify_command(const std::string& input, unsigned seed, int grid_resolution,
                       int subgrad_steps) {
  const magw::ScorePanel panel = magw::load_panel(input);
  const magw::ScoreMatrix S = magw::build_score_matrix(panel);
  const magw::Index m = S.num_experts();

  magw::SolverConfig config;
  const magw::ResultDocument doc = magw::run_solve(panel, config);
  std::cout << "solver objective        Q* = " << doc.objective << "\n";

  bool ok = true;

  if (magw::SimplexGrid{grid_resolution, m}.point_count() <= 1e7) {
    const auto brute = magw::brute_force_minimize(S, {grid_resolution, m});
    const double gap = brute.objective - doc.objective;
    std::cout << "brute-force grid gap       = " << gap << " (grid 1/" << grid_resolution
              << ")\n";
    ok = ok && gap >= -1e-9;
  } else {
    std::cout << "brute-force grid skipped (too many points)\n";
  }

  const magw::WeightVector sub = magw::projected_subgradient_minimize(S, subgrad_steps);
  const double sub_gap = magw::objective(S, sub) - doc.objective;
  std::cout << "subgradient gap            = " << sub_gap << " (" << subgrad_steps
            << " steps)\n";

  // gradient check at seeded random interior points
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  double max_grad_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    magw::Vector raw(m);
    for (magw::Index j = 0; j < m; ++j) raw[j] = unit(rng);
    const magw::WeightVector w(raw / raw.sum());
    const magw::Vector analytic = magw::objective_gradient(S, w);
    const magw::Vector numeric = magw::finite_difference_gradient(S, w, 1e-6);
    max_grad_err = std::max(max_grad_err, (analytic - numeric).lpNorm<Eigen::Infinity>() /
                                              std::max(1.0, analytic.norm()));
  }
  std::cout << "gradient-check max error   = " << max_grad_err << "\n";
  ok = ok && max_grad_err < 1e-5;

  // convexity probe
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    magw::Vector a(m), b(m);
    for (magw::Index j = 0; j < m; ++j) {
      a[j] = unit(rng);
      b[j] = unit(rng);
    }
    const double gap = magw::convexity_gap(S, magw::WeightVector(a / a.sum()),
                                           magw::WeightVector(b / b.sum()), lam(rng));
    min_gap = std::min(min_gap, gap);
  }
  std::cout << "convexity-probe min gap    = " << min_gap << "\n";
  ok = ok && min_gap >= -1e-9;

  // multi-start spread
  double spread = 0.0;
  std::exponential_distribution<double> expo(1.0);
  magw::Vector reference = doc.weights;
  for (int trial = 0; trial < 5; ++trial) {
    magw::Vector raw(m);
    for (magw::Index j = 0; j < m; ++j) raw[j] = expo(rng);
    raw /= raw.sum();
    const magw::ResultDocument restart =
        magw::run_solve(panel, config, std::optional<magw::Vector>(raw));
    spread = std::max(spread, (restart.weights - reference).lpNorm<Eigen::Infinity>());
  }
  std::cout << "multi-start weight spread  = " << spread << "\n";
  if (doc.rank.full_column_rank)
    ok = ok && spread < 1e-6;
  else
    std::cout << "  (rank deficient panel: spread not asserted, objective agreement only)\n";

  const auto order = magw::order_consistency_check(magw::WeightVector(doc.weights),
                                                  doc.distances);
  std::cout << "order consistency          = " << (order.consistent ? "true" : "false")
            << "\n";
  std::cout << (ok ? "verification PASSED\n" : "verification FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expert weight determination for multi-attribute group decision making"};
  app.require_subcommand(1);

  std::string input, constraints_path, out_path, trace_path, init = "uniform";
  double tol = 1e-12, strict_margin = 0.0;
  int max_iter = 200;

  auto* solve_cmd = app.add_subcommand("solve", "determine expert weights from a score panel");
  solve_cmd->add_option("input", input, "score panel CSV")->required();
  solve_cmd->add_option("--tol", tol, "convergence tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "iteration cap");
  solve_cmd->add_option("--init", init, "uniform or w1,...,wm");
  solve_cmd->add_option("--constraints", constraints_path, "extra weight constraint file");
  solve_cmd->add_option("--strict-margin", strict_margin, "margin for strict inequalities");
  solve_cmd->add_option("--out", out_path, "results file (.json or .csv)");
  solve_cmd->add_option("--trace", trace_path, "per-iteration trace CSV");

  unsigned seed = 0;
  int grid_resolution = 200, subgrad_steps = 100000;
  auto* verify_cmd = app.add_subcommand("verify", "independent oracle checks on a panel");
  verify_cmd->add_option("input", input, "score panel CSV")->required();
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--grid", grid_resolution, "brute-force grid resolution");
  verify_cmd->add_option("--subgrad-steps", subgrad_steps, "projected subgradient steps");

  std::string results_path;
  auto* report_cmd = app.add_subcommand("report", "summarize a results JSON file");
  report_cmd->add_option("results", results_path, "results JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return run_solve_command(input, tol, max_iter, init, constraints_path, strict_margin,
                               out_path, trace_path);
    if (verify_cmd->parsed())
      return run_verify_command(input, seed, grid_resolution, subgrad_steps);
    if (report_cmd->parsed()) {
      std::cout << magw::render_report(magw::result_from_json(read_file(results_path)));
      return 0;
    }
  } catch (const magw::InfeasibleModel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const magw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return 0;
}
