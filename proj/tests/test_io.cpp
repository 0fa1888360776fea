#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "magw/constraints.hpp"
#include "magw/decision_model.hpp"
#include "magw/panel_io.hpp"
#include "magw/result.hpp"
#include "test_support.hpp"

#include <random>

using namespace magw;
using magw::testing::load_table1;
using magw::testing::random_panel;

TEST_CASE("parse the bundled panel") {
  const ScorePanel panel = load_table1();
  CHECK(panel.num_alternatives() == 5);
  CHECK(panel.num_indicators() == 6);
  CHECK(panel.num_experts() == 7);
  CHECK(panel.scores[0](0, 0) == 55.0);  // (d1, u1, c1)
  CHECK(panel.experts[3] == "c4");
}

TEST_CASE("parse a minimal single-cell panel") {
  const ScorePanel panel = parse_panel("alternative,indicator,c1\nd1,u1,42\n");
  CHECK(panel.num_alternatives() == 1);
  CHECK(panel.num_indicators() == 1);
  CHECK(panel.num_experts() == 1);
  CHECK(panel.scores[0](0, 0) == 42.0);
}

TEST_CASE("parse errors carry line and column diagnostics") {
  try {
    parse_panel("alternative,indicator,c1,c2\nd1,u1,55,abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("c2") != std::string::npos);
  }
}

TEST_CASE("parse rejects ragged rows") {
  CHECK_THROWS_AS(parse_panel("alternative,indicator,c1,c2\nd1,u1,55\n"), ParseError);
}

TEST_CASE("parse rejects duplicate alternative/indicator pairs") {
  CHECK_THROWS_AS(
      parse_panel("alternative,indicator,c1\nd1,u1,55\nd1,u1,56\n"), ParseError);
}

TEST_CASE("parse rejects mismatched indicator sets") {
  CHECK_THROWS_AS(
      parse_panel("alternative,indicator,c1\nd1,u1,55\nd2,u2,56\n"), ParseError);
}

TEST_CASE("panel round-trip reproduces the numeric content exactly") {
  std::mt19937 rng(31);
  const ScorePanel panel = random_panel(3, 4, 5, rng);
  const ScorePanel again = parse_panel(serialize_panel(panel));
  REQUIRE(again.num_alternatives() == panel.num_alternatives());
  for (size_t i = 0; i < panel.scores.size(); ++i)
    CHECK((again.scores[i] - panel.scores[i]).lpNorm<Eigen::Infinity>() == 0.0);
  const ScorePanel table = load_table1();
  const ScorePanel table_again = parse_panel(serialize_panel(table));
  for (size_t i = 0; i < table.scores.size(); ++i)
    CHECK((table_again.scores[i] - table.scores[i]).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("constraint grammar") {
  const std::vector<std::string> labels = {"c1", "c2", "c3"};

  SUBCASE("expert comparison") {
    const auto cs = parse_constraints("w(c1) >= w(c3)\n", labels);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs[0] == 1.0);
    CHECK(cs[0].coeffs[2] == -1.0);
    CHECK(cs[0].rhs == 0.0);
  }
  SUBCASE("comparison with offset") {
    const auto cs = parse_constraints("w(c2) >= w(c1) + 0.05\n", labels);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs[1] == 1.0);
    CHECK(cs[0].coeffs[0] == -1.0);
    CHECK(cs[0].rhs == doctest::Approx(0.05));
  }
  SUBCASE("scalar bound, flipped operator") {
    const auto cs = parse_constraints("w(c1) <= 0.3\n", labels);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].coeffs[0] == -1.0);
    CHECK(cs[0].rhs == doctest::Approx(-0.3));
  }
  SUBCASE("strict operator applies the margin") {
    const auto cs = parse_constraints("w(c1) > w(c2)\n", labels, 0.01);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].rhs == doctest::Approx(0.01));
  }
  SUBCASE("comments and blank lines are skipped") {
    CHECK(parse_constraints("# nothing\n\n", labels).empty());
  }
  SUBCASE("unknown label") {
    CHECK_THROWS_AS(parse_constraints("w(c9) >= 0.1\n", labels), ParseError);
  }
  SUBCASE("malformed line") {
    CHECK_THROWS_AS(parse_constraints("weights are nice\n", labels), ParseError);
  }
}

TEST_CASE("solve workflow on the bundled panel") {
  const ScorePanel panel = load_table1();
  const ResultDocument doc = run_solve(panel);
  CHECK(doc.termination == TerminationReason::converged);
  CHECK(doc.rank.full_column_rank);
  CHECK(doc.trace.size() == static_cast<size_t>(doc.iterations) + 1);
  CHECK(doc.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));

  SUBCASE("an already-satisfied constraint leaves the solution unchanged") {
    const auto cs = parse_constraints("w(c4) >= w(c2)\n", panel.experts);
    const ResultDocument constrained = run_solve(panel, {}, {}, cs);
    CHECK((constrained.weights - doc.weights).lpNorm<Eigen::Infinity>() < 1e-6);
  }

  SUBCASE("a binding lower bound becomes active") {
    const auto cs = parse_constraints("w(c1) >= 0.2\n", panel.experts);
    const ResultDocument constrained = run_solve(panel, {}, {}, cs);
    CHECK(constrained.termination == TerminationReason::converged);
    CHECK(constrained.weights[0] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(constrained.objective > doc.objective + 1e-6);
  }

  SUBCASE("contradictory bounds are rejected as infeasible") {
    const auto cs = parse_constraints("w(c1) >= 0.6\nw(c2) >= 0.6\n", panel.experts);
    CHECK_THROWS_AS(run_solve(panel, {}, {}, cs), InfeasibleModel);
  }

  SUBCASE("an extreme start converges to the same weights") {
    Vector corner = Vector::Zero(7);
    corner[0] = 1.0;
    const ResultDocument restart = run_solve(panel, {}, std::optional<Vector>(corner));
    CHECK(restart.termination == TerminationReason::converged);
    CHECK((restart.weights - doc.weights).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("duplicated expert columns are flagged but still solvable") {
  ScorePanel panel = load_table1();
  for (auto& block : panel.scores) block.col(6) = block.col(0);
  const ResultDocument doc = run_solve(panel);
  CHECK(doc.termination == TerminationReason::converged);
  CHECK_FALSE(doc.rank.full_column_rank);
  bool warned = false;
  for (const auto& w : doc.warnings)
    if (w.find("full column rank") != std::string::npos) warned = true;
  CHECK(warned);
}

TEST_CASE("negative scores warn but do not fail") {
  ScorePanel panel;
  panel.alternatives = {"d1"};
  panel.indicators = {"u1"};
  panel.experts = {"c1", "c2"};
  Matrix block(1, 2);
  block << -5.0, 10.0;
  panel.scores = {block};
  const ResultDocument doc = run_solve(panel);
  bool warned = false;
  for (const auto& w : doc.warnings)
    if (w.find("negative") != std::string::npos) warned = true;
  CHECK(warned);
}

TEST_CASE("result JSON round-trip") {
  const ResultDocument doc = run_solve(load_table1());
  const ResultDocument again = result_from_json(result_to_json(doc));
  CHECK(again.experts == doc.experts);
  CHECK(again.alternatives == doc.alternatives);
  CHECK((again.weights - doc.weights).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((again.distances - doc.distances).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((again.per_alt_distances - doc.per_alt_distances).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(again.objective == doc.objective);
  CHECK(again.iterations == doc.iterations);
  CHECK(again.termination == doc.termination);
  CHECK(again.trace.size() == doc.trace.size());
  CHECK(again.trace.back().objective == doc.trace.back().objective);
}

TEST_CASE("trace CSV carries both Q and ln Q") {
  const ResultDocument doc = run_solve(load_table1());
  const std::string csv = trace_to_csv(doc);
  CHECK(csv.rfind("k,Q,ln_Q,alpha,merit\n", 0) == 0);
  size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == doc.trace.size() + 1);
}

TEST_CASE("report rendering rounds to three decimals") {
  const ResultDocument doc = run_solve(load_table1());
  const std::string report = render_report(doc);
  CHECK(report.find("0.116") != std::string::npos);
  CHECK(report.find("0.171") != std::string::npos);
  CHECK(report.find("593.001") != std::string::npos);
}
