#ifndef CCDF_SIMULATION_HPP
#define CCDF_SIMULATION_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "ccdf/bands.hpp"
#include "ccdf/sample.hpp"

namespace ccdf {

enum class ModelKind { m1, m2 };

/// Generative models with X ~ N(0, 1):
///   m1: Y | X = x ~ Beta(1, 1 + x^2)
///   m2: Y | X = x ~ Uniform(-|x|, |x|), a point mass at 0 when x = 0.
/// m2 has a discontinuous joint density, so it only approximately meets the
/// continuity assumptions behind the bands.
struct SimModel {
  ModelKind kind{ModelKind::m1};

  std::string_view name() const noexcept { return kind == ModelKind::m1 ? "m1" : "m2"; }
};

SimModel model_from_name(std::string_view name);

/// n i.i.d. pairs, deterministic in `seed`.
Sample<double> draw(const SimModel& model, long long n, std::uint64_t seed);

/// n draws of Y given X = x.
std::vector<double> draw_conditional(const SimModel& model, double x, long long n,
                                     std::uint64_t seed);

/// Standard normal density.
double marginal_density(double x);

double true_cdf(const SimModel& model, double x, double t);
/// F(t- | x).
double true_cdf_left(const SimModel& model, double x, double t);
double true_quantile(const SimModel& model, double x, double alpha);
double true_regression(const SimModel& model, double x);
/// Conditional density f_{Y|X}(y|x); zero for the m2 point mass at x = 0.
double true_conditional_density(const SimModel& model, double x, double y);
DensityPair<double> true_densities(const SimModel& model, double x, double y);

}  // namespace ccdf

#endif  // CCDF_SIMULATION_HPP
