#include "magw/panel_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace magw {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ScorePanel parse_panel(const std::string& csv_text) {
  std::stringstream stream(csv_text);
  std::string line;
  int line_no = 0;

  ScorePanel panel;
  if (!std::getline(stream, line)) throw ParseError("empty input");
  ++line_no;
  const auto header = split_csv(line);
  if (header.size() < 3)
    throw ParseError(line_no, "header must be alternative,indicator,<expert labels>");
  panel.experts.assign(header.begin() + 2, header.end());
  const Index m = static_cast<Index>(panel.experts.size());

  std::map<std::string, Index> alt_index;
  std::vector<std::vector<std::string>> alt_indicators;
  std::vector<std::vector<Vector>> alt_rows;

  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    if (static_cast<Index>(fields.size()) != m + 2)
      throw ParseError(line_no, "expected " + std::to_string(m + 2) + " fields, got " +
                                    std::to_string(fields.size()));
    const std::string& alt = fields[0];
    const std::string& ind = fields[1];
    Vector row(m);
    for (Index j = 0; j < m; ++j) {
      const std::string& cell = fields[static_cast<size_t>(j) + 2];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      const auto res = std::from_chars(first, last, row[j]);
      if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(line_no, "non-numeric cell in column " +
                                      panel.experts[static_cast<size_t>(j)] + ": '" + cell + "'");
      if (!std::isfinite(row[j]))
        throw ParseError(line_no, "non-finite score in column " +
                                      panel.experts[static_cast<size_t>(j)]);
    }
    auto it = alt_index.find(alt);
    if (it == alt_index.end()) {
      it = alt_index.emplace(alt, static_cast<Index>(panel.alternatives.size())).first;
      panel.alternatives.push_back(alt);
      alt_indicators.emplace_back();
      alt_rows.emplace_back();
    }
    auto& indicators = alt_indicators[static_cast<size_t>(it->second)];
    for (const auto& existing : indicators)
      if (existing == ind)
        throw ParseError(line_no, "duplicate (" + alt + ", " + ind + ") pair");
    indicators.push_back(ind);
    alt_rows[static_cast<size_t>(it->second)].push_back(std::move(row));
  }

  if (panel.alternatives.empty()) throw ParseError("no data rows");
  panel.indicators = alt_indicators.front();
  for (size_t i = 1; i < alt_indicators.size(); ++i)
    if (alt_indicators[i] != panel.indicators)
      throw ParseError("alternative " + panel.alternatives[i] +
                       " does not list the same indicators in the same order");

  const Index n = static_cast<Index>(panel.indicators.size());
  for (const auto& rows : alt_rows) {
    Matrix block(n, m);
    for (Index k = 0; k < n; ++k) block.row(k) = rows[static_cast<size_t>(k)].transpose();
    panel.scores.push_back(std::move(block));
  }
  panel.validate();
  return panel;
}

ScorePanel load_panel(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_panel(buffer.str());
}

std::string serialize_panel(const ScorePanel& panel) {
  std::string out = "alternative,indicator";
  for (const auto& e : panel.experts) out += "," + e;
  out += "\n";
  for (Index i = 0; i < panel.num_alternatives(); ++i) {
    for (Index k = 0; k < panel.num_indicators(); ++k) {
      out += panel.alternatives[static_cast<size_t>(i)] + "," +
             panel.indicators[static_cast<size_t>(k)];
      for (Index j = 0; j < panel.num_experts(); ++j)
        out += "," + format_double(panel.scores[static_cast<size_t>(i)](k, j));
      out += "\n";
    }
  }
  return out;
}

}  // namespace magw
