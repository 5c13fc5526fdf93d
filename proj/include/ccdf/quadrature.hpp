#ifndef CCDF_QUADRATURE_HPP
#define CCDF_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ccdf/errors.hpp"

namespace ccdf {

namespace detail {

// QUADPACK 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <int N>
struct Panel {
  double a, b;
  Eigen::Matrix<double, N, 1> value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <int N, typename F>
Panel<N> gauss_kronrod_panel(const F& f, double a, double b) {
  using Vec = Eigen::Matrix<double, N, 1>;
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const Vec center = f(c);
  Vec kronrod = kronrod_weights[7] * center;
  Vec gauss = gauss_weights[3] * center;
  for (int k = 0; k < 7; ++k) {
    const double d = r * kronrod_nodes[k];
    const Vec sum = f(c - d) + f(c + d);
    kronrod += kronrod_weights[k] * sum;
    if (k % 2 == 1) gauss += gauss_weights[k / 2] * sum;
  }
  kronrod *= r;
  gauss *= r;
  return Panel<N>{a, b, kronrod, (kronrod - gauss).cwiseAbs().maxCoeff()};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) integration of a vector-valued
/// integrand over [a, b]. `f` maps double -> Eigen::Matrix<double, N, 1>.
/// Bisects the worst panel until the summed |K15 - G7| estimate drops below
/// `abs_tol` (componentwise maximum); throws QuadratureFailure otherwise.
template <int N, typename F>
Eigen::Matrix<double, N, 1> integrate(const F& f, double a, double b, double abs_tol,
                                      int max_panels = 4000) {
  std::priority_queue<detail::Panel<N>> panels;
  auto first = detail::gauss_kronrod_panel<N>(f, a, b);
  Eigen::Matrix<double, N, 1> total = first.value;
  double error = first.error;
  panels.push(first);
  while (!(error <= abs_tol)) {
    if (!std::isfinite(error)) throw QuadratureFailure("integrand is not finite on the interval");
    if (int(panels.size()) >= max_panels)
      throw QuadratureFailure("quadrature did not reach tolerance " + std::to_string(abs_tol) +
                              " (estimated error " + std::to_string(error) + ")");
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod_panel<N>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_panel<N>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  if (panels.size() == 1) return total;
  total.setZero();
  while (!panels.empty()) {
    total += panels.top().value;
    panels.pop();
  }
  return total;
}

/// Scalar convenience overload.
template <typename F>
double integrate_scalar(const F& f, double a, double b, double abs_tol, int max_panels = 4000) {
  return integrate<1>([&](double u) { return Eigen::Matrix<double, 1, 1>(f(u)); }, a, b,
                      abs_tol, max_panels)[0];
}

}  // namespace ccdf

#endif  // CCDF_QUADRATURE_HPP
