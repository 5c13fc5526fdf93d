#include "ccdf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace ccdf {

namespace {

nlohmann::ordered_json stats_json(const SummaryStats& s, std::uint64_t seed_or_zero, bool has_seed) {
  nlohmann::ordered_json j;
  j["replications"] = s.replications;
  if (has_seed) j["seed"] = seed_or_zero;
  j["mean"] = s.mean;
  j["median"] = s.median;
  j["std"] = s.std;
  return j;
}

// sample sizes and tallies are stored as doubles but are integers by construction
bool is_count(const std::string& key) {
  return key == "n" || key == "nesting_violations" || key == "excluded_rows";
}

nlohmann::ordered_json number(const std::string& key, double v) {
  if (is_count(key)) return static_cast<long long>(v);
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["kind"] = report.kind;
  doc["model"] = report.model;
  doc["kernel"] = report.kernel;
  doc["order"] = report.order;
  doc["seed"] = report.seed;
  doc["replications"] = report.replications;
  if (report.interval) {
    doc["interval"] = {report.interval->lower, report.interval->upper};
    doc["grid_points"] = report.grid_points;
  }

  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    for (const auto& [k, v] : row.parameters) r[k] = number(k, v);
    if (row.seed) r["stream_seed"] = *row.seed;
    if (!row.statistics.empty()) {
      nlohmann::ordered_json stats;
      for (const auto& [k, s] : row.statistics)
        stats[k] = stats_json(s, row.seed.value_or(0), row.seed.has_value());
      r["statistics"] = std::move(stats);
    }
    for (const auto& [k, v] : row.values) r[k] = number(k, v);
    rows.push_back(std::move(r));
  }
  doc["results"] = std::move(rows);

  auto refs = nlohmann::ordered_json::array();
  for (const auto& ref : report.references)
    refs.push_back({{"name", ref.name}, {"value", ref.value}, {"provenance", ref.provenance}});
  doc["references"] = std::move(refs);

  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"criterion", c.criterion}, {"passed", c.passed}});
  doc["checks"] = std::move(checks);
  doc["all_passed"] = report.all_passed();
  return doc;
}

std::string report_to_text(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment " << report.kind << "  model " << report.model << "  kernel " << report.kernel
      << "  order " << report.order;
  if (report.replications > 0) out << "  seed " << report.seed << "  reps " << report.replications;
  out << '\n';

  // one table line per (row, statistic) or per row when there are only values
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header;
  if (!report.rows.empty()) {
    for (const auto& [k, v] : report.rows.front().parameters) header.push_back(k);
    if (!report.rows.front().statistics.empty()) {
      for (const char* h : {"statistic", "reps", "mean", "median", "std"}) header.emplace_back(h);
    }
    for (const auto& [k, v] : report.rows.front().values) header.push_back(k);
  }
  for (const auto& row : report.rows) {
    std::vector<std::string> base;
    for (const auto& [k, v] : row.parameters) base.push_back(num(v));
    std::vector<std::string> tail;
    for (const auto& [k, v] : row.values) tail.push_back(num(v));
    if (row.statistics.empty()) {
      auto line = base;
      line.insert(line.end(), tail.begin(), tail.end());
      table.push_back(std::move(line));
      continue;
    }
    for (std::size_t s = 0; s < row.statistics.size(); ++s) {
      const auto& [name, st] = row.statistics[s];
      auto line = base;
      for (const std::string& cell : {name, std::to_string(st.replications), num(st.mean),
                                      num(st.median), num(st.std)})
        line.push_back(cell);
      if (s == 0) line.insert(line.end(), tail.begin(), tail.end());
      table.push_back(std::move(line));
    }
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& line : table)
    for (std::size_t c = 0; c < line.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], line[c].size());
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size() && c < width.size(); ++c) {
      out << (c ? "  " : "") << line[c] << std::string(width[c] - line[c].size(), ' ');
    }
    out << '\n';
  };
  emit(header);
  for (const auto& line : table) emit(line);

  for (const auto& ref : report.references)
    out << "reference " << ref.name << " = " << num(ref.value) << "  (" << ref.provenance << ")\n";
  for (const auto& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.criterion << '\n';
  return out.str();
}

}  // namespace ccdf
