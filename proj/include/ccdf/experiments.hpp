#ifndef CCDF_EXPERIMENTS_HPP
#define CCDF_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccdf/estimator.hpp"
#include "ccdf/kernels.hpp"
#include "ccdf/sample.hpp"
#include "ccdf/simulation.hpp"

namespace ccdf {

struct Interval {
  double lower{-1.0};
  double upper{1.0};
};

/// `count` equispaced points on [lower, upper] (count = 1 gives the midpoint).
std::vector<double> linspace(double lower, double upper, int count);

// ---------------------------------------------------------------------------
// Quadrature oracles for the smoothed means of the local statistics.

/// f_{n,j}(x,h) = E f_hat_{n,j}(x,h) = int u^j K(u) f_X(x - h u) du, j = 0..2.
struct SmoothedMoments {
  double f0, f1, f2;
};

/// r_{n,j}(x,t,h) = E r_hat_{n,j}(x,t,h) = int u^j K(u) f_X(x - h u) F(t | x - h u) du, j = 0, 1.
struct SmoothedResponses {
  double r0, r1;
};

inline constexpr double default_quadrature_tol = 1e-10;

SmoothedMoments smoothed_moments(const SimModel& model, double x, const Kernel& kernel, double h,
                                 double abs_tol = default_quadrature_tol);
SmoothedResponses smoothed_responses(const SimModel& model, double x, double t,
                                     const Kernel& kernel, double h,
                                     double abs_tol = default_quadrature_tol);

/// Deterministic centering E_hat(F_hat^(order))(t|x) for order 0 or 1,
/// built from the quadrature values of f_{n,j} and r_{n,j}.
double centering_oracle(const SimModel& model, double x, double t, const EstimatorConfig<double>& cfg,
                        int order);
double centering_from(const SmoothedMoments& f, const SmoothedResponses& r, int order);

// ---------------------------------------------------------------------------
// Sup-deviation statistics.

enum class DeviationReference {
  truth,      // F(t|x): total error, bias included
  centering,  // E_hat(F_hat)(t|x): stochastic error only
};

struct DeviationAtX {
  double x;
  double halfwidth;  // L_n(x)
  double max_abs_dev;  // sup_t |F_hat(t|x) - reference(t|x)|, exact over jumps and left limits
};

struct DeviationProfile {
  std::vector<DeviationAtX> points;
  long long excluded{0};
};

DeviationProfile deviation_profile(const Sample<double>& sample, const SimModel& model,
                                   const EstimatorConfig<double>& cfg,
                                   const std::vector<double>& x_grid, DeviationReference reference,
                                   double quad_tol = default_quadrature_tol);

/// max_x max_abs_dev / L_n(x).
double normalized_sup(const DeviationProfile& profile);
/// sqrt(n h / log(1/h)) max_x max_abs_dev.
double rate_normalized_sup(const DeviationProfile& profile, long long n, double h);

struct SupDeviation {
  double value;
  long long excluded;
};

/// Lambda_n against the true cdf.
SupDeviation sup_deviation_statistic(const Sample<double>& sample, const SimModel& model,
                                     const EstimatorConfig<double>& cfg,
                                     const std::vector<double>& x_grid);
/// Lambda_n against the quadrature centering.
SupDeviation stochastic_sup_deviation_statistic(const Sample<double>& sample, const SimModel& model,
                                                const EstimatorConfig<double>& cfg,
                                                const std::vector<double>& x_grid);

/// ||K||_2 / sqrt(2 inf_{x in I} f_X(x)) for the standard normal marginal.
double em_reference_constant(const Kernel& kernel, const Interval& interval);

// ---------------------------------------------------------------------------
// Reports.

struct SummaryStats {
  long long replications{0};
  double mean{0}, median{0}, std{0};
};

SummaryStats summarize(const std::vector<double>& values);

struct ReportRow {
  std::vector<std::pair<std::string, double>> parameters;
  std::optional<std::uint64_t> seed;  // stream seed shared by this row's replications
  std::vector<std::pair<std::string, SummaryStats>> statistics;
  std::vector<std::pair<std::string, double>> values;
};

struct Reference {
  std::string name;
  double value;
  std::string provenance;
};

struct Check {
  std::string name;
  std::string criterion;
  bool passed;
};

struct ExperimentReport {
  std::string kind;
  std::string model;
  std::string kernel;
  int order{1};
  std::uint64_t seed{0};
  long long replications{0};
  std::optional<Interval> interval;
  int grid_points{0};
  std::vector<ReportRow> rows;
  std::vector<Reference> references;
  std::vector<Check> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct ExperimentOptions {
  SimModel model{ModelKind::m1};
  Kernel kernel{KernelType::epanechnikov};
  int order{1};
  double denom_tol{1e-12};
  std::optional<double> bandwidth;  // empty: n^{-1/5} per sample size
  std::vector<long long> n_list{200, 2000};
  long long replications{50};
  std::uint64_t seed{1};
  unsigned threads{0};
  Interval interval{};
  int grid_points{41};
  double epsilon{0.5};
  double quad_tol{default_quadrature_tol};
  double fixed_t{0.5};  // level used by fixed-t statistics
};

EstimatorConfig<double> config_for(const ExperimentOptions& opts, long long n, int order);

/// Lambda_n against truth and against the centering, per sample size.
ExperimentReport sup_experiment(const ExperimentOptions& opts);

/// Simultaneous coverage of the (1 + eps) and (1 - eps) bands.
ExperimentReport coverage_experiment(const ExperimentOptions& opts);

/// Residuals of f_{n,j}, r_{n,j} against their small-bandwidth limits at x.
ExperimentReport bochner_check(const SimModel& model, double x, const std::vector<double>& h_sequence,
                               const Kernel& kernel, double t = 0.5,
                               double quad_tol = default_quadrature_tol);

/// Rate-normalized sup deviation of F_hat^(0) and F_hat^(1) versus the limit constant.
ExperimentReport em_constant_experiment(const ExperimentOptions& opts);

}  // namespace ccdf

#endif  // CCDF_EXPERIMENTS_HPP
