#pragma once

#include "magw/expert_weights.hpp"

namespace magw {

/// Parses constraint lines of the form
///   w(<label>) <op> w(<label>) [+ <number>]
///   w(<label>) <op> <number>
/// with op in {>=, <=, >, <}. Strict operators are tightened by
/// strict_margin: `w(a) > w(b)` becomes w_a - w_b >= strict_margin.
/// Blank lines and lines starting with '#' are ignored.
std::vector<LinearInequality> parse_constraints(const std::string& text,
                                                const std::vector<std::string>& expert_labels,
                                                double strict_margin = 0.0);

}  // namespace magw
