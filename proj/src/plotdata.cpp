#include "ccdf/plotdata.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "ccdf/errors.hpp"
#include "ccdf/io.hpp"

namespace ccdf {

std::vector<PlotPoint> plot_points(const BandTable<double>& band, const SimModel* model) {
  if (band.kind != BandKind::cdf) throw InvalidArgument("plot data needs a cdf band table");
  std::vector<PlotPoint> out;
  out.reserve(band.rows.size() * (model ? 4 : 3));
  for (const auto& row : band.rows) {
    const double t = *row.t;
    out.push_back({row.x, t, "estimate", row.estimate});
    out.push_back({row.x, t, "lower", row.lower});
    out.push_back({row.x, t, "upper", row.upper});
    if (model) out.push_back({row.x, t, "truth", true_cdf(*model, row.x, t)});
  }
  return out;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& points) {
  out << "x,t,series,value\n";
  for (const auto& p : points)
    out << format_double(p.x) << ',' << format_double(p.t) << ',' << p.series << ','
        << format_double(p.value) << '\n';
}

namespace {

struct Style {
  const char* colour;
  const char* dash;
  bool step;
};

Style style_for(const std::string& series) {
  if (series == "estimate") return {"#000000", "6,3", true};
  if (series == "truth") return {"#1f5fbf", "", false};
  return {"#888888", "", true};
}

}  // namespace

void write_plot_svg(std::ostream& out, const std::vector<PlotPoint>& points) {
  // x -> series -> (t, value), in input order
  std::map<double, std::map<std::string, std::vector<std::pair<double, double>>>> panels;
  double t_lo = 0.0, t_hi = 1.0, v_lo = 0.0, v_hi = 1.0;
  if (!points.empty()) {
    t_lo = t_hi = points.front().t;
  }
  for (const auto& p : points) {
    panels[p.x][p.series].emplace_back(p.t, p.value);
    t_lo = std::min(t_lo, p.t);
    t_hi = std::max(t_hi, p.t);
    v_lo = std::min(v_lo, p.value);
    v_hi = std::max(v_hi, p.value);
  }
  if (t_hi <= t_lo) t_hi = t_lo + 1.0;

  constexpr double width = 480, height = 220, margin = 36;
  const double total_height = height * double(std::max<std::size_t>(panels.size(), 1));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n", width,
                total_height);
  out << buf;

  std::size_t index = 0;
  for (const auto& [x, series] : panels) {
    const double top = height * double(index++);
    auto px = [&](double t) { return margin + (t - t_lo) / (t_hi - t_lo) * (width - 2 * margin); };
    auto py = [&](double v) {
      return top + height - margin - (v - v_lo) / (v_hi - v_lo) * (height - 2 * margin);
    };
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#cccccc\"/>\n",
                  margin, top + margin, width - 2 * margin, height - 2 * margin);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">x = %g</text>\n",
                  margin, top + margin - 8, x);
    out << buf;
    for (const auto& [name, pts] : series) {
      const auto st = style_for(name);
      out << "<polyline fill=\"none\" stroke=\"" << st.colour << "\"";
      if (*st.dash) out << " stroke-dasharray=\"" << st.dash << "\"";
      out << " points=\"";
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (st.step && k > 0) {
          std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(pts[k].first), py(pts[k - 1].second));
          out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(pts[k].first), py(pts[k].second));
        out << buf;
      }
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace ccdf
