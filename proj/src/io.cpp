#include "ccdf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "ccdf/errors.hpp"

namespace ccdf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw ParseError(line, "cannot parse '" + std::string(field) + "' as a number");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Sample<double> parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(line_no, "expected exactly two comma-separated fields");
    const auto lhs = trim(body.substr(0, comma));
    const auto rhs = trim(body.substr(comma + 1));
    if (!have_header) {
      if (lhs != "x" || rhs != "y") throw ParseError(line_no, "expected header 'x,y'");
      have_header = true;
      continue;
    }
    xs.push_back(parse_field(lhs, line_no));
    ys.push_back(parse_field(rhs, line_no));
  }
  if (xs.empty()) throw EmptyInput("no observations in input");
  return Sample<double>(xs, ys);
}

Sample<double> ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return parse_csv(in);
}

void write_sample_csv(std::ostream& out, const Sample<double>& sample) {
  out << "x,y\n";
  for (Eigen::Index i = 0; i < sample.size(); ++i)
    out << format_double(sample.xs()[i]) << ',' << format_double(sample.ys()[i]) << '\n';
}

void write_band_csv(std::ostream& out, const BandTable<double>& table) {
  out << "x,t,estimate,halfwidth,lower,upper\n";
  for (const auto& row : table.rows) {
    out << format_double(row.x) << ',';
    if (row.t) out << format_double(*row.t);
    out << ',' << format_double(row.estimate) << ',' << format_double(row.halfwidth) << ','
        << format_double(row.lower) << ',' << format_double(row.upper) << '\n';
  }
}

nlohmann::ordered_json band_to_json(const BandTable<double>& table) {
  nlohmann::ordered_json meta;
  meta["kind"] = to_string(table.kind);
  meta["order"] = table.order;
  meta["kernel"] = table.kernel;
  meta["h"] = table.bandwidth;
  meta["n"] = table.n;
  meta["multiplier"] = table.multiplier;
  meta["clipped"] = table.clipped;
  meta["omitted"] = table.omitted;
  if (table.density_source) {
    meta["density_source"] = to_string(*table.density_source);
    if (*table.density_source == DensitySource::plugin)
      meta["density_note"] = "product-kernel joint density with the estimator bandwidth in both coordinates";
  }

  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    r["x"] = row.x;
    r["t"] = row.t ? nlohmann::ordered_json(*row.t) : nlohmann::ordered_json(nullptr);
    r["estimate"] = row.estimate;
    r["halfwidth"] = row.halfwidth;
    r["lower"] = row.lower;
    r["upper"] = row.upper;
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace ccdf
