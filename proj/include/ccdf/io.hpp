#ifndef CCDF_IO_HPP
#define CCDF_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ccdf/bands.hpp"
#include "ccdf/sample.hpp"

namespace ccdf {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Reads a `x,y` CSV. Blank lines are ignored; any other malformed or
/// non-finite row raises ParseError with its 1-based line number.
Sample<double> parse_csv(std::istream& in);
Sample<double> ingest_csv(const std::string& path);

void write_sample_csv(std::ostream& out, const Sample<double>& sample);

/// Header `x,t,estimate,halfwidth,lower,upper`; t is empty for regression and
/// quantile tables.
void write_band_csv(std::ostream& out, const BandTable<double>& table);
nlohmann::ordered_json band_to_json(const BandTable<double>& table);

}  // namespace ccdf

#endif  // CCDF_IO_HPP
