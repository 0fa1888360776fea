#include "magw/constraints.hpp"

#include "magw/panel_io.hpp"

#include <algorithm>
#include <regex>

namespace magw {

namespace {

Index label_index(const std::string& label, const std::vector<std::string>& labels,
                  int line_no) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end())
    throw ParseError(line_no, "unknown expert label '" + label + "'");
  return static_cast<Index>(it - labels.begin());
}

}  // namespace

std::vector<LinearInequality> parse_constraints(const std::string& text,
                                                const std::vector<std::string>& expert_labels,
                                                double strict_margin) {
  static const std::regex pair_rule(
      R"(^\s*w\(([^)\s]+)\)\s*(>=|<=|>|<)\s*w\(([^)\s]+)\)\s*(?:\+\s*([-+0-9.eE]+)\s*)?$)");
  static const std::regex bound_rule(
      R"(^\s*w\(([^)\s]+)\)\s*(>=|<=|>|<)\s*([-+0-9.eE]+)\s*$)");

  const Index m = static_cast<Index>(expert_labels.size());
  std::vector<LinearInequality> constraints;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto content = line.find_first_not_of(" \t\r");
    if (content == std::string::npos || line[content] == '#') continue;

    std::smatch match;
    LinearInequality c;
    c.coeffs = Vector::Zero(m);
    c.text = line;
    std::string op;
    double rhs_value = 0.0;

    if (std::regex_match(line, match, pair_rule)) {
      const Index a = label_index(match[1], expert_labels, line_no);
      op = match[2];
      const Index b = label_index(match[3], expert_labels, line_no);
      const double offset = match[4].matched ? std::stod(match[4].str()) : 0.0;
      // w_a op w_b + offset
      c.coeffs[a] = 1.0;
      c.coeffs[b] -= 1.0;  // handles a == b
      rhs_value = offset;
    } else if (std::regex_match(line, match, bound_rule)) {
      const Index a = label_index(match[1], expert_labels, line_no);
      op = match[2];
      c.coeffs[a] = 1.0;
      rhs_value = std::stod(match[3].str());
    } else {
      throw ParseError(line_no, "cannot parse constraint '" + line + "'");
    }

    const bool strict = op == ">" || op == "<";
    if (op == "<=" || op == "<") {
      c.coeffs = -c.coeffs;
      rhs_value = -rhs_value;
    }
    c.rhs = rhs_value + (strict ? strict_margin : 0.0);
    constraints.push_back(std::move(c));
  }
  return constraints;
}

}  // namespace magw
