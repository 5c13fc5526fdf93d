#ifndef CCDF_PLOTDATA_HPP
#define CCDF_PLOTDATA_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ccdf/bands.hpp"
#include "ccdf/simulation.hpp"

namespace ccdf {

/// One long-format record; series is estimate, lower, upper or truth.
struct PlotPoint {
  double x;
  double t;
  std::string series;
  double value;
};

/// Flattens a cdf band table; adds the truth series when `model` is given.
std::vector<PlotPoint> plot_points(const BandTable<double>& band, const SimModel* model);

/// Header `x,t,series,value`.
void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& points);

/// Static SVG with one panel per x location.
void write_plot_svg(std::ostream& out, const std::vector<PlotPoint>& points);

}  // namespace ccdf

#endif  // CCDF_PLOTDATA_HPP
