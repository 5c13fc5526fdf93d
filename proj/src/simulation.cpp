#include "ccdf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ccdf/errors.hpp"
#include "ccdf/rng.hpp"

namespace ccdf {

namespace {

double draw_response(const SimModel& model, double x, double u) {
  if (model.kind == ModelKind::m1) return 1.0 - std::pow(1.0 - u, 1.0 / (1.0 + x * x));
  return std::abs(x) * (2.0 * u - 1.0);
}

}  // namespace

SimModel model_from_name(std::string_view name) {
  if (name == "m1") return SimModel{ModelKind::m1};
  if (name == "m2") return SimModel{ModelKind::m2};
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected m1 or m2)");
}

Sample<double> draw(const SimModel& model, long long n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("draw: n must be positive");
  Rng rng(seed);
  Vector<double> xs(n), ys(n);
  for (long long i = 0; i < n; ++i) {
    xs[i] = rng.normal();
    ys[i] = draw_response(model, xs[i], rng.uniform());
  }
  return Sample<double>(std::move(xs), std::move(ys));
}

std::vector<double> draw_conditional(const SimModel& model, double x, long long n,
                                     std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("draw_conditional: n must be positive");
  Rng rng(seed);
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (auto& y : ys) y = draw_response(model, x, rng.uniform());
  return ys;
}

double marginal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double true_cdf(const SimModel& model, double x, double t) {
  if (model.kind == ModelKind::m1) {
    if (t < 0.0) return 0.0;
    if (t > 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - t, 1.0 + x * x);
  }
  const double a = std::abs(x);
  if (a == 0.0) return t >= 0.0 ? 1.0 : 0.0;
  return std::clamp((t + a) / (2.0 * a), 0.0, 1.0);
}

double true_cdf_left(const SimModel& model, double x, double t) {
  if (model.kind == ModelKind::m2 && x == 0.0) return t > 0.0 ? 1.0 : 0.0;
  return true_cdf(model, x, t);
}

double true_quantile(const SimModel& model, double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  if (model.kind == ModelKind::m1) return 1.0 - std::pow(1.0 - alpha, 1.0 / (1.0 + x * x));
  return std::abs(x) * (2.0 * alpha - 1.0);
}

double true_regression(const SimModel& model, double x) {
  return model.kind == ModelKind::m1 ? 1.0 / (2.0 + x * x) : 0.0;
}

double true_conditional_density(const SimModel& model, double x, double y) {
  if (model.kind == ModelKind::m1) {
    if (y < 0.0 || y > 1.0) return 0.0;
    return (1.0 + x * x) * std::pow(1.0 - y, x * x);
  }
  const double a = std::abs(x);
  if (a == 0.0 || std::abs(y) >= a) return 0.0;
  return 1.0 / (2.0 * a);
}

DensityPair<double> true_densities(const SimModel& model, double x, double y) {
  const double fx = marginal_density(x);
  return DensityPair<double>{fx, fx * true_conditional_density(model, x, y), DensitySource::oracle};
}

}  // namespace ccdf
