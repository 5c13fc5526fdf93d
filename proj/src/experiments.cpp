#include "ccdf/experiments.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ccdf/bands.hpp"
#include "ccdf/errors.hpp"
#include "ccdf/parallel.hpp"
#include "ccdf/quadrature.hpp"
#include "ccdf/rng.hpp"

namespace ccdf {

std::vector<double> linspace(double lower, double upper, int count) {
  if (count < 1) throw InvalidArgument("grid needs at least one point");
  if (!(lower <= upper)) throw InvalidArgument("grid bounds must satisfy lower <= upper");
  if (count == 1) return {0.5 * (lower + upper)};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (upper - lower) / double(count - 1);
  for (int i = 0; i < count; ++i) out[i] = lower + step * double(i);
  out.back() = upper;
  return out;
}

SmoothedMoments smoothed_moments(const SimModel&, double x, const Kernel& kernel, double h,
                                 double abs_tol) {
  // the marginal is N(0, 1) for both models
  const auto range = kernel.integration_range();
  const auto v = integrate<3>(
      [&](double u) {
        const double w = eval(kernel, u) * marginal_density(x - h * u);
        return Eigen::Vector3d(w, w * u, w * u * u);
      },
      range.lower, range.upper, abs_tol);
  return {v[0], v[1], v[2]};
}

SmoothedResponses smoothed_responses(const SimModel& model, double x, double t,
                                     const Kernel& kernel, double h, double abs_tol) {
  const auto range = kernel.integration_range();
  const auto v = integrate<2>(
      [&](double u) {
        const double xs = x - h * u;
        const double w = eval(kernel, u) * marginal_density(xs) * true_cdf(model, xs, t);
        return Eigen::Vector2d(w, w * u);
      },
      range.lower, range.upper, abs_tol);
  return {v[0], v[1]};
}

double centering_from(const SmoothedMoments& f, const SmoothedResponses& r, int order) {
  if (order == 0) return r.r0 / f.f0;
  if (order == 1) return (f.f2 * r.r0 - f.f1 * r.r1) / (f.f0 * f.f2 - f.f1 * f.f1);
  throw InvalidArgument("centering is available for orders 0 and 1");
}

double centering_oracle(const SimModel& model, double x, double t, const EstimatorConfig<double>& cfg,
                        int order) {
  cfg.validate();
  if (order != 0 && order != 1) throw InvalidArgument("centering is available for orders 0 and 1");
  const auto f = smoothed_moments(model, x, cfg.kernel, cfg.bandwidth);
  const auto r = smoothed_responses(model, x, t, cfg.kernel, cfg.bandwidth);
  return centering_from(f, r, order);
}

namespace {

struct CurveAtX {
  CdfCurve<double> curve;
  double halfwidth;
};

// Computes one profile per requested order, sharing the quadrature of
// r_{n,j}(x, t) across orders (all orders share the same jump set).
std::vector<DeviationProfile> profiles(const Sample<double>& sample, const SimModel& model,
                                       const EstimatorConfig<double>& base,
                                       const std::vector<int>& orders,
                                       const std::vector<double>& x_grid,
                                       DeviationReference reference, double quad_tol) {
  base.validate();
  std::vector<DeviationProfile> out(orders.size());
  for (const double x : x_grid) {
    std::vector<std::optional<CurveAtX>> curves(orders.size());
    const CdfCurve<double>* jumps = nullptr;
    for (std::size_t o = 0; o < orders.size(); ++o) {
      auto cfg = base;
      cfg.order = orders[o];
      try {
        curves[o] = CurveAtX{cdf_curve(sample, x, cfg, false), band_halfwidth(sample, x, cfg)};
        if (!jumps) jumps = &curves[o]->curve;
      } catch (const InsufficientLocalData&) {
        ++out[o].excluded;
      }
    }
    if (!jumps) continue;

    std::vector<double> ref(std::size_t(jumps->size()));
    std::vector<double> ref_left(ref.size());
    std::vector<SmoothedResponses> resp;
    SmoothedMoments moments{};
    if (reference == DeviationReference::truth) {
      for (Eigen::Index k = 0; k < jumps->size(); ++k) {
        ref[k] = true_cdf(model, x, jumps->jump_ts[k]);
        ref_left[k] = true_cdf_left(model, x, jumps->jump_ts[k]);
      }
    } else {
      moments = smoothed_moments(model, x, base.kernel, base.bandwidth, quad_tol);
      resp.reserve(ref.size());
      for (Eigen::Index k = 0; k < jumps->size(); ++k)
        resp.push_back(smoothed_responses(model, x, jumps->jump_ts[k], base.kernel, base.bandwidth,
                                          quad_tol));
    }

    for (std::size_t o = 0; o < orders.size(); ++o) {
      if (!curves[o]) continue;
      const auto& curve = curves[o]->curve;
      if (reference == DeviationReference::centering) {
        for (std::size_t k = 0; k < resp.size(); ++k) {
          ref[k] = centering_from(moments, resp[k], orders[o]);
          ref_left[k] = ref[k];  // continuous in t for both models
        }
      }
      double dev = 0.0;
      for (Eigen::Index k = 0; k < curve.size(); ++k) {
        dev = std::max(dev, std::abs(curve.values[k] - ref[k]));
        dev = std::max(dev, std::abs(curve.left_limit(k) - ref_left[k]));
      }
      // beyond the last jump the reference tends to 1
      dev = std::max(dev, std::abs(curve.values[curve.size() - 1] - 1.0));
      out[o].points.push_back({x, curves[o]->halfwidth, dev});
    }
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t size_seed(std::uint64_t seed, long long n) {
  return stream_seed(seed, static_cast<std::uint64_t>(n));
}

ExperimentReport report_header(const std::string& kind, const ExperimentOptions& opts,
                               int order) {
  ExperimentReport report;
  report.kind = kind;
  report.model = std::string(opts.model.name());
  report.kernel = std::string(opts.kernel.name());
  report.order = order;
  report.seed = opts.seed;
  report.replications = opts.replications;
  report.interval = opts.interval;
  report.grid_points = opts.grid_points;
  return report;
}

void check_options(const ExperimentOptions& opts) {
  if (opts.replications < 1) throw InvalidArgument("replication count must be positive");
  if (opts.n_list.empty()) throw InvalidArgument("n list is empty");
  for (const auto n : opts.n_list)
    if (n < 2) throw InvalidArgument("sample sizes must be at least 2");
}

const SummaryStats& stat(const ReportRow& row, const std::string& name) {
  for (const auto& [key, value] : row.statistics)
    if (key == name) return value;
  throw InvalidArgument("no statistic named " + name);
}

double value(const ReportRow& row, const std::string& name) {
  for (const auto& [key, v] : row.values)
    if (key == name) return v;
  throw InvalidArgument("no value named " + name);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

DeviationProfile deviation_profile(const Sample<double>& sample, const SimModel& model,
                                   const EstimatorConfig<double>& cfg,
                                   const std::vector<double>& x_grid, DeviationReference reference,
                                   double quad_tol) {
  if (reference == DeviationReference::centering && cfg.order > 1)
    throw InvalidArgument("centering reference is available for orders 0 and 1");
  return profiles(sample, model, cfg, {cfg.order}, x_grid, reference, quad_tol).front();
}

double normalized_sup(const DeviationProfile& profile) {
  if (profile.points.empty()) throw InsufficientLocalData("every grid location was excluded");
  double best = 0.0;
  for (const auto& p : profile.points) best = std::max(best, p.max_abs_dev / p.halfwidth);
  return best;
}

double rate_normalized_sup(const DeviationProfile& profile, long long n, double h) {
  if (profile.points.empty()) throw InsufficientLocalData("every grid location was excluded");
  double best = 0.0;
  for (const auto& p : profile.points) best = std::max(best, p.max_abs_dev);
  return std::sqrt(double(n) * h / std::log(1.0 / h)) * best;
}

SupDeviation sup_deviation_statistic(const Sample<double>& sample, const SimModel& model,
                                     const EstimatorConfig<double>& cfg,
                                     const std::vector<double>& x_grid) {
  const auto p = deviation_profile(sample, model, cfg, x_grid, DeviationReference::truth);
  return {normalized_sup(p), p.excluded};
}

SupDeviation stochastic_sup_deviation_statistic(const Sample<double>& sample, const SimModel& model,
                                                const EstimatorConfig<double>& cfg,
                                                const std::vector<double>& x_grid) {
  const auto p = deviation_profile(sample, model, cfg, x_grid, DeviationReference::centering);
  return {normalized_sup(p), p.excluded};
}

double em_reference_constant(const Kernel& kernel, const Interval& interval) {
  if (!(interval.lower <= interval.upper)) throw InvalidArgument("interval bounds are reversed");
  // the standard normal density is unimodal at 0
  double inf_fx = std::min(marginal_density(interval.lower), marginal_density(interval.upper));
  return std::sqrt(l2_norm_sq(kernel)) / std::sqrt(2.0 * inf_fx);
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.replications = static_cast<long long>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
  s.median = median_of(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / double(values.size() - 1));
  }
  return s;
}

EstimatorConfig<double> config_for(const ExperimentOptions& opts, long long n, int order) {
  EstimatorConfig<double> cfg;
  cfg.kernel = opts.kernel;
  cfg.order = order;
  cfg.denom_tol = opts.denom_tol;
  cfg.bandwidth = opts.bandwidth ? *opts.bandwidth : reference_bandwidth(n);
  cfg.validate();
  return cfg;
}

ExperimentReport sup_experiment(const ExperimentOptions& opts) {
  check_options(opts);
  if (opts.order > 1) throw InvalidArgument("sup experiment supports orders 0 and 1");
  auto report = report_header("sup", opts, opts.order);
  const auto grid = linspace(opts.interval.lower, opts.interval.upper, opts.grid_points);

  for (const long long n : opts.n_list) {
    const auto cfg = config_for(opts, n, opts.order);
    const auto reps = std::size_t(opts.replications);
    std::vector<double> total(reps), stochastic(reps), gap(reps);
    std::vector<long long> excluded(reps);
    const auto seed_n = size_seed(opts.seed, n);
    parallel_for(reps, opts.threads, [&](std::size_t r) {
      const auto sample = draw(opts.model, n, stream_seed(seed_n, r));
      const auto truth = deviation_profile(sample, opts.model, cfg, grid, DeviationReference::truth);
      const auto centred =
          deviation_profile(sample, opts.model, cfg, grid, DeviationReference::centering, opts.quad_tol);
      total[r] = normalized_sup(truth);
      stochastic[r] = normalized_sup(centred);
      gap[r] = std::abs(stochastic[r] - 1.0);
      excluded[r] = truth.excluded + centred.excluded;
    });
    ReportRow row;
    row.parameters = {{"n", double(n)}, {"h", cfg.bandwidth}};
    row.seed = seed_n;
    row.statistics = {{"lambda_total", summarize(total)},
                      {"lambda_stochastic", summarize(stochastic)},
                      {"abs_lambda_stochastic_minus_one", summarize(gap)}};
    row.values = {{"excluded_rows", double(std::accumulate(excluded.begin(), excluded.end(), 0LL))}};
    report.rows.push_back(std::move(row));
  }

  report.references.push_back(
      {"lambda_limit", 1.0, "probability limit of the L_n-normalized sup deviation"});
  const auto& last = report.rows.back();
  const double med = stat(last, "lambda_stochastic").median;
  report.checks.push_back({"median_lambda_stochastic_bracket",
                           "median lambda_stochastic at n=" + fmt(opts.n_list.back()) +
                               " in [0.4, 2.5] (observed " + fmt(med) + ")",
                           med >= 0.4 && med <= 2.5});
  if (report.rows.size() >= 2) {
    const double first_gap = stat(report.rows.front(), "abs_lambda_stochastic_minus_one").median;
    const double last_gap = stat(last, "abs_lambda_stochastic_minus_one").median;
    report.checks.push_back({"lambda_gap_shrinks",
                             "median |lambda_stochastic - 1| at n=" + fmt(opts.n_list.back()) +
                                 " <= at n=" + fmt(opts.n_list.front()) + " (" + fmt(last_gap) +
                                 " vs " + fmt(first_gap) + ")",
                             last_gap <= first_gap});
  }
  return report;
}

ExperimentReport coverage_experiment(const ExperimentOptions& opts) {
  check_options(opts);
  if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0))
    throw InvalidArgument("coverage experiment needs 0 < epsilon < 1");
  auto report = report_header("coverage", opts, opts.order);
  const auto grid = linspace(opts.interval.lower, opts.interval.upper, opts.grid_points);

  long long violations = 0;
  for (const long long n : opts.n_list) {
    const auto cfg = config_for(opts, n, opts.order);
    const auto reps = std::size_t(opts.replications);
    std::vector<double> lambda(reps);
    std::vector<int> outer(reps), inner(reps);
    std::vector<long long> excluded(reps);
    const auto seed_n = size_seed(opts.seed, n);
    parallel_for(reps, opts.threads, [&](std::size_t r) {
      const auto sample = draw(opts.model, n, stream_seed(seed_n, r));
      const auto truth = deviation_profile(sample, opts.model, cfg, grid, DeviationReference::truth);
      // F(t|x) lies in F_hat +/- c L_n(x) for all (x, t) iff max dev / L_n <= c
      lambda[r] = normalized_sup(truth);
      outer[r] = lambda[r] <= 1.0 + opts.epsilon;
      inner[r] = lambda[r] <= 1.0 - opts.epsilon;
      excluded[r] = truth.excluded;
    });
    long long n_violations = 0;
    for (std::size_t r = 0; r < reps; ++r) n_violations += inner[r] && !outer[r];
    violations += n_violations;

    ReportRow row;
    row.parameters = {{"n", double(n)}, {"h", cfg.bandwidth}, {"epsilon", opts.epsilon}};
    row.seed = seed_n;
    row.statistics = {{"lambda_total", summarize(lambda)}};
    row.values = {
        {"coverage_outer", double(std::accumulate(outer.begin(), outer.end(), 0)) / double(reps)},
        {"coverage_inner", double(std::accumulate(inner.begin(), inner.end(), 0)) / double(reps)},
        {"nesting_violations", double(n_violations)},
        {"excluded_rows", double(std::accumulate(excluded.begin(), excluded.end(), 0LL))}};
    report.rows.push_back(std::move(row));
  }

  report.references.push_back({"coverage_outer_limit", 1.0, "limit of the (1+eps) band coverage"});
  report.references.push_back({"coverage_inner_limit", 0.0, "limit of the (1-eps) band coverage"});
  report.checks.push_back({"nesting_every_replication",
                           "(1-eps) event implies (1+eps) event in every replication",
                           violations == 0});
  if (report.rows.size() >= 2) {
    const double first = value(report.rows.front(), "coverage_outer");
    const double last = value(report.rows.back(), "coverage_outer");
    report.checks.push_back({"outer_coverage_trend",
                             "(1+eps) coverage at n=" + fmt(opts.n_list.back()) + " >= at n=" +
                                 fmt(opts.n_list.front()) + " (" + fmt(last) + " vs " + fmt(first) + ")",
                             last >= first});
  }
  return report;
}

ExperimentReport bochner_check(const SimModel& model, double x, const std::vector<double>& h_sequence,
                               const Kernel& kernel, double t, double quad_tol) {
  if (h_sequence.empty()) throw InvalidArgument("bandwidth sequence is empty");
  ExperimentReport report;
  report.kind = "bochner";
  report.model = std::string(model.name());
  report.kernel = std::string(kernel.name());
  report.order = 1;

  const double fx = marginal_density(x);
  const double big_f = true_cdf(model, x, t);
  const char* names[5] = {"f0", "f1", "f2", "r0", "r1"};
  std::vector<std::array<double, 5>> residuals;
  for (const double h : h_sequence) {
    if (!(h > 0.0 && h < 1.0)) throw InvalidBandwidth("bandwidths must lie in (0, 1)");
    const auto f = smoothed_moments(model, x, kernel, h, quad_tol);
    const auto r = smoothed_responses(model, x, t, kernel, h, quad_tol);
    const std::array<double, 5> res = {std::abs(f.f0 - fx * moment(kernel, 0)),
                                       std::abs(f.f1 - fx * moment(kernel, 1)),
                                       std::abs(f.f2 - fx * moment(kernel, 2)),
                                       std::abs(r.r0 - fx * big_f),
                                       std::abs(r.r1 - fx * big_f * moment(kernel, 1))};
    residuals.push_back(res);
    ReportRow row;
    row.parameters = {{"h", h}, {"x", x}, {"t", t}};
    for (int s = 0; s < 5; ++s) row.values.emplace_back(std::string("residual_") + names[s], res[s]);
    row.values.emplace_back("f0_over_fx", f.f0 / fx);
    report.rows.push_back(std::move(row));
  }

  report.references.push_back({"fx", fx, "standard normal density at x"});
  report.references.push_back({"F(t|x)", big_f, "closed-form conditional cdf"});
  constexpr double negligible = 1e-6;
  for (int s = 0; s < 5; ++s) {
    bool shrinking = true;
    bool tiny = true;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      tiny = tiny && residuals[i][s] < negligible;
      if (i > 0 && h_sequence[i] < h_sequence[i - 1])
        shrinking = shrinking && residuals[i][s] <= residuals[i - 1][s];
    }
    report.checks.push_back({std::string("residual_") + names[s] + "_shrinks",
                             "residual non-increasing as h decreases, or below 1e-6 throughout",
                             shrinking || tiny});
  }
  return report;
}

ExperimentReport em_constant_experiment(const ExperimentOptions& opts) {
  check_options(opts);
  auto report = report_header("em-constant", opts, 0);
  const auto grid = linspace(opts.interval.lower, opts.interval.upper, opts.grid_points);
  const double theta = em_reference_constant(opts.kernel, opts.interval);

  for (const long long n : opts.n_list) {
    const auto cfg = config_for(opts, n, 0);
    const double h = cfg.bandwidth;
    const double rate = std::sqrt(double(n) * h / std::log(1.0 / h));
    const auto reps = std::size_t(opts.replications);
    std::vector<double> stat0(reps), stat1(reps), stat_t(reps);
    std::vector<long long> excluded(reps);
    const auto seed_n = size_seed(opts.seed, n);
    const auto moments_at = [&] {
      std::vector<SmoothedMoments> m;
      for (const double x : grid) m.push_back(smoothed_moments(opts.model, x, cfg.kernel, h, opts.quad_tol));
      return m;
    }();
    std::vector<double> centre_t(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
      centre_t[g] = centering_from(
          moments_at[g], smoothed_responses(opts.model, grid[g], opts.fixed_t, cfg.kernel, h, opts.quad_tol), 1);

    parallel_for(reps, opts.threads, [&](std::size_t r) {
      const auto sample = draw(opts.model, n, stream_seed(seed_n, r));
      const auto both = profiles(sample, opts.model, cfg, {0, 1}, grid, DeviationReference::centering,
                                 opts.quad_tol);
      stat0[r] = rate_normalized_sup(both[0], n, h);
      stat1[r] = rate_normalized_sup(both[1], n, h);
      auto cfg1 = cfg;
      cfg1.order = 1;
      double dev_t = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        try {
          dev_t = std::max(dev_t, std::abs(cdf_estimate(sample, grid[g], opts.fixed_t, cfg1) - centre_t[g]));
        } catch (const InsufficientLocalData&) {
        }
      }
      stat_t[r] = rate * dev_t;
      excluded[r] = both[0].excluded + both[1].excluded;
    });

    ReportRow row;
    row.parameters = {{"n", double(n)}, {"h", h}};
    row.seed = seed_n;
    row.statistics = {{"em_order0", summarize(stat0)},
                      {"em_order1", summarize(stat1)},
                      {"fixed_t_order1", summarize(stat_t)}};
    row.values = {{"excluded_rows", double(std::accumulate(excluded.begin(), excluded.end(), 0LL))}};
    report.rows.push_back(std::move(row));
  }

  double sup_ratio = 0.0;
  for (const double x : grid) {
    const double big_f = true_cdf(opts.model, x, opts.fixed_t);
    sup_ratio = std::max(sup_ratio, big_f * (1.0 - big_f) / marginal_density(x));
  }
  report.references.push_back({"theta", theta, "||K||_2 / sqrt(2 inf_I f_X), standard normal marginal"});
  report.references.push_back({"sigma_F", theta, "sqrt(||K||_2^2 / (2 inf_I f_X)), equal to theta"});
  report.references.push_back({"sigma_F_t", std::sqrt(2.0 * l2_norm_sq(opts.kernel) * sup_ratio),
                               "sqrt(2 ||K||_2^2 sup_x F(t|x)(1-F(t|x))/f_X(x)) over the x grid at t=" +
                                   fmt(opts.fixed_t)});
  const double med = stat(report.rows.back(), "em_order0").median;
  report.checks.push_back({"em_order0_within_factor_2",
                           "median em_order0 at n=" + fmt(opts.n_list.back()) + " in [theta/2, 2 theta] (" +
                               fmt(med) + " vs theta " + fmt(theta) + ")",
                           med >= theta / 2.0 && med <= 2.0 * theta});
  return report;
}

}  // namespace ccdf
