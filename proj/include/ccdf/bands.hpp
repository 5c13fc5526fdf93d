#ifndef CCDF_BANDS_HPP
#define CCDF_BANDS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccdf/errors.hpp"
#include "ccdf/estimator.hpp"
#include "ccdf/kernels.hpp"
#include "ccdf/sample.hpp"

namespace ccdf {

enum class BandKind { cdf, regression, quantile };

inline const char* to_string(BandKind kind) noexcept {
  switch (kind) {
    case BandKind::cdf: return "cdf";
    case BandKind::regression: return "regression";
    case BandKind::quantile: return "quantile";
  }
  return "";
}

enum class DensitySource { oracle, plugin };

inline const char* to_string(DensitySource source) noexcept {
  return source == DensitySource::oracle ? "oracle" : "plugin";
}

/// Marginal density at x and joint density at (x, y).
template <typename Scalar = double>
struct DensityPair {
  Scalar fx{};
  Scalar fxy{};
  DensitySource source{DensitySource::plugin};
};

template <typename Scalar = double>
struct BandRow {
  Scalar x{};
  std::optional<Scalar> t;  // empty for regression and quantile bands
  Scalar estimate{};
  Scalar halfwidth{};
  Scalar lower{};
  Scalar upper{};
};

template <typename Scalar = double>
struct BandTable {
  BandKind kind{BandKind::cdf};
  int order{1};
  std::string kernel;
  Scalar bandwidth{};
  long long n{};
  /// Multiplier applied to L_n(x): 1 + eps (outer), 1 - eps (inner), or the
  /// width factor of derived bands.
  Scalar multiplier{1};
  bool clipped{false};
  /// Grid locations skipped because the local design was singular there.
  long long omitted{0};
  std::optional<DensitySource> density_source;
  std::vector<BandRow<Scalar>> rows;
};

/// Half-width L_n(x) = sqrt(||K||^2 log(1/h) / (2 n h f0)) from its ingredients.
template <typename Scalar>
Scalar band_halfwidth(const Kernel& kernel, long long n, Scalar h, Scalar f0) {
  using std::log;
  using std::sqrt;
  if (!(h > Scalar(0) && h < Scalar(1)))
    throw InvalidBandwidth("band half-width requires 0 < h < 1");
  return sqrt(Scalar(l2_norm_sq(kernel)) * log(Scalar(1) / h) / (Scalar(2 * n) * h * f0));
}

template <typename Scalar>
Scalar band_halfwidth(const Sample<Scalar>& sample, Scalar x, const EstimatorConfig<Scalar>& cfg) {
  cfg.validate();
  const Scalar f0 = local_moments(sample, x, cfg, 0)[0];
  if (!(f0 > cfg.denom_tol))
    throw InsufficientLocalData("no kernel mass at x = " + std::to_string(double(x)));
  return band_halfwidth(cfg.kernel, sample.size(), cfg.bandwidth, f0);
}

namespace detail {

template <typename Scalar>
void check_grid(const std::vector<Scalar>& grid, const char* what) {
  if (grid.empty()) throw InvalidArgument(std::string(what) + " grid is empty");
}

template <typename Scalar>
BandRow<Scalar> make_row(Scalar x, std::optional<Scalar> t, Scalar estimate, Scalar halfwidth,
                         bool clip) {
  BandRow<Scalar> row{x, t, estimate, halfwidth, estimate - halfwidth, estimate + halfwidth};
  if (clip) {
    row.lower = std::clamp(row.lower, Scalar(0), Scalar(1));
    row.upper = std::clamp(row.upper, Scalar(0), Scalar(1));
  }
  return row;
}

template <typename Scalar>
BandTable<Scalar> table_header(BandKind kind, const Sample<Scalar>& sample,
                               const EstimatorConfig<Scalar>& cfg) {
  BandTable<Scalar> table;
  table.kind = kind;
  table.order = cfg.order;
  table.kernel = std::string(cfg.kernel.name());
  table.bandwidth = cfg.bandwidth;
  table.n = sample.size();
  return table;
}

}  // namespace detail

/// Certainty band F_hat(t|x) +/- (1 +/- eps) L_n(x) on a grid.
///
/// `t_grid` empty means "every jump of the curve at x". Rows are computed
/// from the raw (non-monotonized) curve. `inner` selects the (1 - eps) band.
template <typename Scalar>
BandTable<Scalar> cdf_band(const Sample<Scalar>& sample, const std::vector<Scalar>& x_grid,
                           const std::optional<std::vector<Scalar>>& t_grid,
                           const EstimatorConfig<Scalar>& cfg, Scalar epsilon, bool clip,
                           bool inner = false) {
  cfg.validate();
  detail::check_grid(x_grid, "x");
  if (t_grid) detail::check_grid(*t_grid, "t");
  if (!(epsilon >= Scalar(0) && epsilon < Scalar(1)))
    throw InvalidArgument("epsilon must lie in [0, 1)");

  auto table = detail::table_header(BandKind::cdf, sample, cfg);
  table.multiplier = inner ? Scalar(1) - epsilon : Scalar(1) + epsilon;
  table.clipped = clip;
  for (const Scalar x : x_grid) {
    try {
      const auto curve = cdf_curve(sample, x, cfg, false);
      const Scalar hw = table.multiplier * band_halfwidth(sample, x, cfg);
      if (t_grid) {
        for (const Scalar t : *t_grid)
          table.rows.push_back(detail::make_row(x, std::optional<Scalar>(t), curve.value_at(t), hw, clip));
      } else {
        for (Eigen::Index k = 0; k < curve.size(); ++k)
          table.rows.push_back(detail::make_row(x, std::optional<Scalar>(curve.jump_ts[k]),
                                                curve.values[k], hw, clip));
      }
    } catch (const InsufficientLocalData&) {
      ++table.omitted;
    }
  }
  return table;
}

/// Regression band m_hat(x) +/- (beta - alpha) L_n(x) for responses in [alpha, beta].
template <typename Scalar>
BandTable<Scalar> regression_band(const Sample<Scalar>& sample, const std::vector<Scalar>& x_grid,
                                  const EstimatorConfig<Scalar>& cfg, Scalar y_lo, Scalar y_hi) {
  cfg.validate();
  detail::check_grid(x_grid, "x");
  if (!(y_lo < y_hi)) throw InvalidArgument("y range must satisfy alpha < beta");
  if (sample.min_y() < y_lo || sample.max_y() > y_hi)
    throw YRangeViolation("responses span [" + std::to_string(double(sample.min_y())) + ", " +
                          std::to_string(double(sample.max_y())) + "], outside the declared y range");

  auto table = detail::table_header(BandKind::regression, sample, cfg);
  table.multiplier = y_hi - y_lo;
  for (const Scalar x : x_grid) {
    try {
      const Scalar m = regression_estimate(sample, x, cfg);
      const Scalar hw = table.multiplier * band_halfwidth(sample, x, cfg);
      table.rows.push_back(detail::make_row(x, std::optional<Scalar>{}, m, hw, false));
    } catch (const InsufficientLocalData&) {
      ++table.omitted;
    }
  }
  return table;
}

/// Supplies (f_X(x), f_{X,Y}(x, q)) given x and the estimated quantile q.
template <typename Scalar = double>
using DensityProvider = std::function<DensityPair<Scalar>(Scalar x, Scalar q)>;

/// Quantile band q_hat(x) +/- 2 L_n(x) f_X(x) / f_{X,Y}(x, q).
///
/// The quantile is read off the monotonized curve unless `raw_curve` is set.
/// Throws ZeroJointDensity if the provider reports fxy <= cfg.denom_tol.
template <typename Scalar>
BandTable<Scalar> quantile_band(const Sample<Scalar>& sample, const std::vector<Scalar>& x_grid,
                                Scalar alpha, const EstimatorConfig<Scalar>& cfg,
                                const DensityProvider<Scalar>& densities,
                                bool raw_curve = false) {
  cfg.validate();
  detail::check_grid(x_grid, "x");
  if (!(alpha > Scalar(0) && alpha < Scalar(1)))
    throw InvalidArgument("quantile level must lie in (0, 1)");

  auto table = detail::table_header(BandKind::quantile, sample, cfg);
  table.multiplier = Scalar(2);
  for (const Scalar x : x_grid) {
    try {
      const auto curve = cdf_curve(sample, x, cfg, !raw_curve);
      const Scalar q = quantile_estimate(curve, alpha);
      const Scalar ln = band_halfwidth(sample, x, cfg);
      const auto dens = densities(x, q);
      table.density_source = dens.source;
      if (!(dens.fxy > cfg.denom_tol))
        throw ZeroJointDensity("joint density vanishes at x = " + std::to_string(double(x)) +
                               ", q = " + std::to_string(double(q)));
      const Scalar hw = Scalar(2) * ln * dens.fx / dens.fxy;
      table.rows.push_back(detail::make_row(x, std::optional<Scalar>{}, q, hw, false));
    } catch (const InsufficientLocalData&) {
      ++table.omitted;
    }
  }
  return table;
}

/// Parzen-Rosenblatt estimates: fx = f_hat_{n,0}(x,h) and the product-kernel
/// joint density (1/(n h^2)) sum_i K((x - X_i)/h) K((y - Y_i)/h).
template <typename Scalar>
DensityPair<Scalar> density_plugin(const Sample<Scalar>& sample, Scalar x, Scalar y,
                                   const EstimatorConfig<Scalar>& cfg) {
  cfg.validate();
  const Scalar h = cfg.bandwidth;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Array ux = detail::scaled_offsets(sample, x, h);
  const Array uy = (y - sample.ys().array()) / h;
  const Array kx = eval(cfg.kernel, ux);
  const Array ky = eval(cfg.kernel, uy);
  DensityPair<Scalar> out;
  out.fx = local_moments(sample, x, cfg, 0)[0];
  out.fxy = (kx * ky).sum() / (Scalar(sample.size()) * h * h);
  out.source = DensitySource::plugin;
  return out;
}

}  // namespace ccdf

#endif  // CCDF_BANDS_HPP
