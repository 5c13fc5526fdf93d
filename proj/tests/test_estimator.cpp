#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ccdf/estimator.hpp"
#include "oracles.hpp"

using namespace ccdf;

namespace {

EstimatorConfig<double> config(KernelType k, double h, int order) {
  EstimatorConfig<double> cfg;
  cfg.kernel = Kernel(k);
  cfg.bandwidth = h;
  cfg.order = order;
  return cfg;
}

Sample<double> random_sample(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> nx;
  std::uniform_real_distribution<double> ny(-2.0, 2.0);
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = nx(gen);
    ys[i] = ny(gen);
  }
  return Sample<double>(xs, ys);
}

double oracle_kernel(KernelType k, double u) {
  switch (k) {
    case KernelType::epanechnikov: return oracle::epanechnikov(u);
    case KernelType::uniform: return oracle::uniform(u);
    case KernelType::gaussian: return oracle::gaussian(u);
  }
  return 0.0;
}

}  // namespace

TEST_CASE("local_moments examples") {
  const auto cfg = config(KernelType::epanechnikov, 0.5, 0);
  const Sample<double> one({0.0}, {0.3});
  const auto f = local_moments(one, 0.0, cfg, 2);
  CHECK(f[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.0);

  // right-continuous uniform kernel: K(0) = 1 and K(-1/2) = 1
  const Sample<double> two({0.0, 0.25}, {0.0, 0.0});
  CHECK(local_moments(two, 0.0, config(KernelType::uniform, 0.5, 0), 0)[0] == 2.0);
  CHECK_THROWS_AS(local_moments(one, 0.0, cfg, 5), InvalidArgument);
}

TEST_CASE("uniform kernel window is half-open") {
  // the point at u = -1/2 is inside the window; the one at u = +1/2 is not
  const Sample<double> s({0.0, 0.25, -0.25}, {1.0, 2.0, 3.0});
  const auto f = local_moments(s, 0.0, config(KernelType::uniform, 0.5, 0), 1);
  CHECK(f[0] == doctest::Approx(2.0 / (3 * 0.5)));
  CHECK(f[1] == doctest::Approx(-0.5 / (3 * 0.5)));
}

TEST_CASE("local_responses examples") {
  const auto cfg = config(KernelType::epanechnikov, 0.5, 1);
  const Sample<double> one({0.0}, {0.3});
  CHECK(local_responses(one, 0.0, 0.4, cfg, 0)[0] == doctest::Approx(1.5));
  CHECK(local_responses(one, 0.0, 0.2, cfg, 0)[0] == 0.0);

  std::mt19937_64 gen(7);
  const auto s = random_sample(gen, 50);
  const auto f = local_moments(s, 0.2, cfg, 2);
  const auto r_hi = local_responses(s, 0.2, s.max_y(), cfg, 2);
  const auto r_lo = local_responses(s, 0.2, s.min_y() - 1.0, cfg, 2);
  for (int j = 0; j <= 2; ++j) {
    CHECK(r_hi[j] == doctest::Approx(f[j]).epsilon(1e-14));
    CHECK(r_lo[j] == 0.0);
  }
  CHECK_THROWS_AS(local_responses(s, 0.0, 0.0, cfg, 3), InvalidArgument);
}

TEST_CASE("config validation") {
  const Sample<double> one({0.0}, {0.3});
  CHECK_THROWS_AS(local_moments(one, 0.0, config(KernelType::epanechnikov, 1.0, 0), 0),
                  InvalidBandwidth);
  CHECK_THROWS_AS(local_moments(one, 0.0, config(KernelType::epanechnikov, 0.0, 0), 0),
                  InvalidBandwidth);
  CHECK_THROWS_AS(local_weights(one, 0.0, config(KernelType::epanechnikov, 0.5, 3)),
                  InvalidArgument);
  auto cfg = config(KernelType::epanechnikov, 0.5, 0);
  cfg.denom_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("sample rejects malformed input") {
  CHECK_THROWS_AS(Sample<double>(std::vector<double>{}, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(Sample<double>({1.0, 2.0}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(Sample<double>({1.0}, {std::nan("")}), InvalidArgument);
}

TEST_CASE("weights: normalization, linear reproduction and support") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> nd(5, 200);
  std::uniform_real_distribution<double> hd(0.05, 0.95), xd(-1.5, 1.5);
  int successes = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = random_sample(gen, nd(gen));
    const auto k = static_cast<KernelType>(rep % 3);
    const auto cfg = config(k, hd(gen), rep % 3 == 0 ? 2 : (rep % 2));
    const double x = xd(gen);
    try {
      const auto lw = local_weights(s, x, cfg);
      ++successes;
      CHECK(std::abs(lw.weights.sum() - 1.0) < 1e-10);
      const Eigen::ArrayXd u = (x - s.xs().array()) / cfg.bandwidth;
      if (cfg.order >= 1) CHECK(std::abs((lw.weights.array() * u).sum()) < 1e-10);
      if (cfg.order == 2) CHECK(std::abs((lw.weights.array() * u * u).sum()) < 1e-10);
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (oracle_kernel(k, u[i]) == 0.0) CHECK(lw.weights[i] == 0.0);
    } catch (const InsufficientLocalData&) {
    }
  }
  CHECK(successes > 150);
}

TEST_CASE("weights match the closed-form ratios") {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_sample(gen, 80);
    const double x = 0.3, h = 0.6, t = 0.1;
    for (int order = 0; order <= 2; ++order) {
      const auto cfg = config(KernelType::epanechnikov, h, order);
      const auto f = local_moments(s, x, cfg, 4);
      const auto r = local_responses(s, x, t, cfg, 2);
      double direct = 0;
      if (order == 0) {
        direct = r[0] / f[0];
      } else if (order == 1) {
        direct = (f[2] * r[0] - f[1] * r[1]) / (f[0] * f[2] - f[1] * f[1]);
      } else {
        const double a1 = f[2] * f[4] - f[3] * f[3];
        const double a2 = f[2] * f[3] - f[1] * f[4];
        const double a3 = f[1] * f[3] - f[2] * f[2];
        direct = (a1 * r[0] + a2 * r[1] + a3 * r[2]) / (a1 * f[0] + a2 * f[1] + a3 * f[2]);
      }
      CHECK(cdf_estimate(s, x, t, cfg) == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("order 1 cdf estimate equals an independent weighted least squares intercept") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> hd(0.1, 0.9), xd(-1.0, 1.0), td(-2.0, 2.0);
  int checked = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = random_sample(gen, 20 + rep);
    const auto k = static_cast<KernelType>(rep % 3);
    const auto cfg = config(k, hd(gen), 1);
    const double x = xd(gen), t = td(gen);
    std::vector<double> xs(s.xs().data(), s.xs().data() + s.size());
    std::vector<double> z(s.size()), w(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      z[i] = s.ys()[i] <= t ? 1.0 : 0.0;
      w[i] = oracle_kernel(k, (x - xs[i]) / cfg.bandwidth);
    }
    double got;
    try {
      got = cdf_estimate(s, x, t, cfg);
    } catch (const InsufficientLocalData&) {
      continue;
    }
    ++checked;
    CHECK(std::abs(got - oracle::wls_intercept(xs, z, w, x)) < 1e-9);
  }
  CHECK(checked >= 95);
}

TEST_CASE("single point and symmetric designs") {
  const Sample<double> one({0.1}, {0.4});
  const auto lw = local_weights(one, 0.0, config(KernelType::epanechnikov, 0.5, 0));
  REQUIRE(lw.weights.size() == 1);
  CHECK(lw.weights[0] == doctest::Approx(1.0));
  CHECK(cdf_estimate(one, 0.0, 0.5, config(KernelType::epanechnikov, 0.5, 0)) == 1.0);
  CHECK(cdf_estimate(one, 0.0, 0.3, config(KernelType::epanechnikov, 0.5, 0)) == 0.0);
  CHECK(regression_estimate(one, 0.0, config(KernelType::epanechnikov, 0.5, 0)) ==
        doctest::Approx(0.4));

  const double x = 0.2, h = 0.8;
  const Sample<double> three({x - h / 4, x, x + h / 4}, {1.0, 2.0, 3.0});
  const auto w0 = local_weights(three, x, config(KernelType::uniform, h, 0)).weights;
  const auto w1 = local_weights(three, x, config(KernelType::uniform, h, 1)).weights;
  for (int i = 0; i < 3; ++i) {
    CHECK(w0[i] == doctest::Approx(1.0 / 3));
    CHECK(w1[i] == doctest::Approx(w0[i]).epsilon(1e-12));
  }
}

TEST_CASE("empty window and degenerate designs") {
  const Sample<double> far({5.0, 6.0}, {0.0, 1.0});
  CHECK_THROWS_AS(local_weights(far, 0.0, config(KernelType::epanechnikov, 0.5, 0)),
                  InsufficientLocalData);
  CHECK(local_moments(far, 0.0, config(KernelType::epanechnikov, 0.5, 0), 2).isZero());
  // one distinct x in the window cannot support a line
  const Sample<double> tied({0.1, 0.1, 0.1}, {0.0, 1.0, 2.0});
  CHECK_THROWS_AS(local_weights(tied, 0.0, config(KernelType::epanechnikov, 0.5, 1)),
                  InsufficientLocalData);
  const Sample<double> two({0.1, -0.1}, {0.0, 1.0});
  CHECK_THROWS_AS(local_weights(two, 0.0, config(KernelType::epanechnikov, 0.5, 2)),
                  InsufficientLocalData);
  CHECK_NOTHROW(local_weights(two, 0.0, config(KernelType::epanechnikov, 0.5, 1)));
}

TEST_CASE("crafted negative weight makes the raw order 1 curve non-monotone") {
  const Sample<double> s({0.1, 0.2, 0.3, 0.6}, {0.1, 0.2, 0.4, 0.3});
  auto cfg = config(KernelType::epanechnikov, 0.999, 1);
  const auto lw = local_weights(s, 0.0, cfg);
  CHECK(lw.weights.minCoeff() < 0.0);

  // independent weights from the closed form
  const double h = cfg.bandwidth;
  double f0 = 0, f1 = 0, f2 = 0;
  for (double xi : {0.1, 0.2, 0.3, 0.6}) {
    const double u = -xi / h, k = oracle::epanechnikov(u);
    f0 += k;
    f1 += u * k;
    f2 += u * u * k;
  }
  const double d = f0 * f2 - f1 * f1;
  std::vector<double> expect;
  for (double xi : {0.1, 0.2, 0.3, 0.6}) {
    const double u = -xi / h;
    expect.push_back((f2 - u * f1) * oracle::epanechnikov(u) / d);
  }
  for (int i = 0; i < 4; ++i) CHECK(lw.weights[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  const auto raw = cdf_curve(s, lw, false);
  REQUIRE(raw.size() == 4);
  bool decreasing = false;
  for (Eigen::Index k = 1; k < raw.size(); ++k) decreasing |= raw.values[k] < raw.values[k - 1];
  CHECK(decreasing);
  CHECK(raw.values.maxCoeff() > 1.0);
  CHECK(raw.values[3] == doctest::Approx(1.0));

  const auto mono = cdf_curve(s, lw, true);
  CHECK(mono.monotonized);
  for (Eigen::Index k = 1; k < mono.size(); ++k) CHECK(mono.values[k] >= mono.values[k - 1]);
  CHECK(mono.values.minCoeff() >= 0.0);
  CHECK(mono.values.maxCoeff() <= 1.0);
  CHECK(mono.values[0] == doctest::Approx(raw.values[0]));
}

TEST_CASE("curve structure") {
  std::mt19937_64 gen(3);
  const auto s = random_sample(gen, 300);
  for (int order = 0; order <= 2; ++order) {
    const auto cfg = config(KernelType::epanechnikov, 0.4, order);
    const auto raw = cdf_curve(s, 0.1, cfg, false);
    CHECK(raw.jump_ts.size() == raw.values.size());
    for (Eigen::Index k = 1; k < raw.size(); ++k) CHECK(raw.jump_ts[k] > raw.jump_ts[k - 1]);
    CHECK(raw.jump_ts[0] == s.min_y());
    CHECK(raw.jump_ts[raw.size() - 1] == s.max_y());
    CHECK(raw.values[raw.size() - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(raw.value_at(s.min_y() - 1.0) == 0.0);
    for (Eigen::Index k = 0; k < raw.size(); ++k)
      CHECK(raw.values[k] == doctest::Approx(cdf_estimate(s, 0.1, raw.jump_ts[k], cfg)));
    if (order == 0) {
      const auto mono = cdf_curve(s, 0.1, cfg, true);
      CHECK(mono.values == raw.values);
      CHECK(raw.values.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("tied responses accumulate on one jump") {
  const Sample<double> s({0.0, 0.1, -0.1, 0.2}, {1.0, 1.0, 2.0, 1.0});
  const auto curve = cdf_curve(s, 0.0, config(KernelType::epanechnikov, 0.5, 0), false);
  REQUIRE(curve.size() == 2);
  CHECK(curve.jump_ts[0] == 1.0);
  CHECK(curve.values[1] == doctest::Approx(1.0));
}

TEST_CASE("regression reproduces constants, lines and quadratics") {
  std::mt19937_64 gen(17);
  const auto base = random_sample(gen, 200);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(base.size(), 2.5);
  Eigen::VectorXd line = 1.0 - 3.0 * base.xs().array();
  Eigen::VectorXd quad = (0.5 + base.xs().array() - 2.0 * base.xs().array().square()).matrix();
  for (const auto k : {KernelType::epanechnikov, KernelType::uniform, KernelType::gaussian}) {
    for (double x : {-0.7, 0.0, 0.9}) {
      CHECK(regression_estimate(Sample<double>(base.xs(), c), x, config(k, 0.5, 0)) ==
            doctest::Approx(2.5));
      CHECK(std::abs(regression_estimate(Sample<double>(base.xs(), line), x, config(k, 0.5, 1)) -
                     (1.0 - 3.0 * x)) < 1e-8);
      CHECK(std::abs(regression_estimate(Sample<double>(base.xs(), quad), x, config(k, 0.5, 2)) -
                     (0.5 + x - 2.0 * x * x)) < 1e-8);
    }
  }
}

TEST_CASE("shift equivariance") {
  std::mt19937_64 gen(23);
  const auto s = random_sample(gen, 150);
  const double shift = 3.7;
  const Sample<double> moved((s.xs().array() + shift).matrix(), s.ys());
  for (int order = 0; order <= 2; ++order) {
    const auto cfg = config(KernelType::gaussian, 0.3, order);
    for (double x : {-0.5, 0.0, 0.8})
      for (double t : {-1.0, 0.0, 1.2})
        CHECK(std::abs(cdf_estimate(s, x, t, cfg) - cdf_estimate(moved, x + shift, t, cfg)) <
              1e-10);
  }
}

TEST_CASE("quantile examples") {
  CdfCurve<double> two;
  two.jump_ts = Eigen::Vector2d(-1.0, 1.0);
  two.values = Eigen::Vector2d(0.5, 1.0);
  CHECK(quantile_estimate(two, 0.5) == -1.0);
  CHECK(quantile_estimate(two, std::nextafter(0.5, 1.0)) == 1.0);
  CHECK_THROWS_AS(quantile_estimate(two, 0.0), InvalidArgument);
  CHECK_THROWS_AS(quantile_estimate(two, 1.0), InvalidArgument);

  CdfCurve<double> low;
  low.jump_ts = Eigen::Vector2d(0.0, 1.0);
  low.values = Eigen::Vector2d(0.2, 0.4);
  CHECK_THROWS_AS(quantile_estimate(low, 0.5), NoCrossing);
}

TEST_CASE("quantile and cdf are consistent on monotonized curves") {
  std::mt19937_64 gen(29);
  const auto s = random_sample(gen, 400);
  for (int order = 0; order <= 2; ++order) {
    const auto curve = cdf_curve(s, 0.0, config(KernelType::epanechnikov, 0.5, order), true);
    for (double alpha : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      const double q = quantile_estimate(curve, alpha);
      CHECK(curve.value_at(q) >= alpha);
      const auto k = std::lower_bound(curve.jump_ts.data(), curve.jump_ts.data() + curve.size(), q) -
                     curve.jump_ts.data();
      CHECK(curve.left_limit(k) < alpha);
    }
  }
}

TEST_CASE("order 0 median on Beta(1,1) data at x = 0 is near 1/2") {
  // Y | X = x ~ Beta(1, 1 + x^2), so the conditional median at 0 is 1/2
  std::mt19937_64 gen(31);
  std::normal_distribution<double> nx;
  std::uniform_real_distribution<double> u01;
  std::vector<double> xs(2000), ys(2000);
  for (int i = 0; i < 2000; ++i) {
    xs[i] = nx(gen);
    ys[i] = 1.0 - std::pow(1.0 - u01(gen), 1.0 / (1.0 + xs[i] * xs[i]));
  }
  const Sample<double> s(xs, ys);
  const auto curve = cdf_curve(s, 0.0, config(KernelType::epanechnikov, reference_bandwidth(2000), 0), true);
  CHECK(std::abs(quantile_estimate(curve, 0.5) - 0.5) < 0.1);
}

TEST_CASE("reference bandwidth") {
  CHECK(reference_bandwidth(100) == doctest::Approx(0.398107170553497).epsilon(1e-12));
  CHECK(reference_bandwidth(500) == doctest::Approx(0.288539981181443).epsilon(1e-12));
  CHECK_THROWS_AS(reference_bandwidth(1), InvalidArgument);
}

TEST_CASE("long double instantiation agrees with double") {
  std::mt19937_64 gen(37);
  const auto s = random_sample(gen, 100);
  const Sample<long double> sl(s.xs().cast<long double>().eval(), s.ys().cast<long double>().eval());
  EstimatorConfig<long double> cl;
  cl.bandwidth = 0.5L;
  cl.order = 2;
  const auto cfg = config(KernelType::epanechnikov, 0.5, 2);
  for (double t : {-1.0, 0.0, 1.0})
    CHECK(std::abs(double(cdf_estimate(sl, 0.1L, (long double)t, cl)) -
                   cdf_estimate(s, 0.1, t, cfg)) < 1e-12);
}
