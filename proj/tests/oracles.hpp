// Test-only reference computations. Nothing here calls into the library's
// estimator or quadrature code.
#ifndef CCDF_TESTS_ORACLES_HPP
#define CCDF_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Recursive adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 60) {
  auto rule = [&](double l, double r, double fl, double fm, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double eps, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = rule(l, m, fl, flm, fm);
        const double right = rule(m, r, fm, frm, fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
          return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, eps / 2.0, d - 1) +
               rec(m, r, fm, frm, fr, right, eps / 2.0, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth);
}

/// Simpson over `pieces` equal panels, so narrow features are not skipped by
/// the first coarse pass.
inline double simpson_pieces(const std::function<double(double)>& f, double a, double b, double tol,
                             int pieces) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) total += simpson(f, a + i * w, a + (i + 1) * w, tol / pieces);
  return total;
}

/// Closed-form kernels written out independently of the library.
inline double epanechnikov(double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }
inline double uniform(double u) { return (u >= -0.5 && u < 0.5) ? 1.0 : 0.0; }
inline double gaussian(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); }

/// Intercept of the weighted least-squares fit z ~ b0 + b1 (X - x), solved
/// through the 2x2 normal equations by Cramer's rule.
inline double wls_intercept(const std::vector<double>& xs, const std::vector<double>& z,
                            const std::vector<double>& w, double x) {
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - x;
    s0 += w[i];
    s1 += w[i] * d;
    s2 += w[i] * d * d;
    t0 += w[i] * z[i];
    t1 += w[i] * d * z[i];
  }
  return (s2 * t0 - s1 * t1) / (s0 * s2 - s1 * s1);
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

}  // namespace oracle

#endif  // CCDF_TESTS_ORACLES_HPP
