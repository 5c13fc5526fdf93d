#ifndef CCDF_REPORT_HPP
#define CCDF_REPORT_HPP

#include <string>

#include <json.hpp>

#include "ccdf/experiments.hpp"

namespace ccdf {

nlohmann::ordered_json report_to_json(const ExperimentReport& report);

/// Aligned plain-text rendering: one line per (row, statistic).
std::string report_to_text(const ExperimentReport& report);

}  // namespace ccdf

#endif  // CCDF_REPORT_HPP
