#ifndef CCDF_ESTIMATOR_HPP
#define CCDF_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include "ccdf/errors.hpp"
#include "ccdf/kernels.hpp"
#include "ccdf/sample.hpp"

namespace ccdf {

template <typename Scalar = double>
struct EstimatorConfig {
  Kernel kernel{KernelType::epanechnikov};
  Scalar bandwidth{0.5};
  int order{1};
  Scalar denom_tol{1e-12};

  void validate() const {
    if (!(bandwidth > Scalar(0) && bandwidth < Scalar(1)))
      throw InvalidBandwidth("bandwidth must lie in (0, 1), got " +
                             std::to_string(static_cast<double>(bandwidth)));
    if (order < 0 || order > 2) throw InvalidArgument("estimator order must be 0, 1 or 2");
    if (!(denom_tol > Scalar(0))) throw InvalidArgument("denom_tol must be positive");
  }
};

/// F_hat(t|x) = sum_i w_i 1{Y_i <= t}. `window` lists the indices with K(u_i) > 0.
template <typename Scalar = double>
struct LocalWeights {
  Scalar x{};
  Vector<Scalar> weights;
  std::vector<Eigen::Index> window;
  int order{0};
};

/// Right-continuous step function t -> F_hat(t|x) tabulated at its jumps.
template <typename Scalar = double>
struct CdfCurve {
  Scalar x{};
  Vector<Scalar> jump_ts;
  Vector<Scalar> values;
  int order{0};
  bool monotonized{false};

  Eigen::Index size() const noexcept { return jump_ts.size(); }

  /// F_hat(t|x); zero below the first jump.
  Scalar value_at(Scalar t) const {
    const auto* begin = jump_ts.data();
    const auto* end = begin + jump_ts.size();
    const auto* it = std::upper_bound(begin, end, t);
    if (it == begin) return Scalar(0);
    return values[(it - begin) - 1];
  }

  /// F_hat(t_k - |x), the value just before jump k.
  Scalar left_limit(Eigen::Index k) const { return k == 0 ? Scalar(0) : values[k - 1]; }
};

namespace detail {

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> scaled_offsets(const Sample<Scalar>& sample, Scalar x,
                                                       Scalar h) {
  return (x - sample.xs().array()) / h;
}

}  // namespace detail

/// [f_hat_{n,0}(x,h), ..., f_hat_{n,jmax}(x,h)] with
/// f_hat_{n,j} = (1/(n h)) sum_i u_i^j K(u_i), u_i = (x - X_i)/h.
template <typename Scalar>
Vector<Scalar> local_moments(const Sample<Scalar>& sample, Scalar x,
                             const EstimatorConfig<Scalar>& cfg, int jmax) {
  cfg.validate();
  if (jmax < 0 || jmax > 4) throw InvalidArgument("local_moments: jmax must lie in 0..4");
  const Scalar h = cfg.bandwidth;
  const Scalar nh = Scalar(sample.size()) * h;
  const auto u = detail::scaled_offsets(sample, x, h);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> term = eval(cfg.kernel, u);
  Vector<Scalar> out(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    out[j] = term.sum() / nh;
    term *= u;
  }
  return out;
}

/// r_hat_{n,j}(x,t,h) = (1/(n h)) sum_i 1{Y_i <= t} u_i^j K(u_i) for j = 0..jmax.
template <typename Scalar>
Vector<Scalar> local_responses(const Sample<Scalar>& sample, Scalar x, Scalar t,
                               const EstimatorConfig<Scalar>& cfg, int jmax) {
  cfg.validate();
  if (jmax < 0 || jmax > 2) throw InvalidArgument("local_responses: jmax must lie in 0..2");
  const Scalar h = cfg.bandwidth;
  const Scalar nh = Scalar(sample.size()) * h;
  const auto u = detail::scaled_offsets(sample, x, h);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> term =
      (sample.ys().array() <= t).select(eval(cfg.kernel, u), Scalar(0));
  Vector<Scalar> out(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    out[j] = term.sum() / nh;
    term *= u;
  }
  return out;
}

/// Equivalent-kernel weights of the local polynomial fit of order 0, 1 or 2.
///
/// The weights are algebraically those of the closed forms
///   order 0: K(u_i) / (n h f0)
///   order 1: (f2 - u_i f1) K(u_i) / (n h (f0 f2 - f1^2))
///   order 2: (a1 + a2 u_i + a3 u_i^2) K(u_i) / (n h (a1 f0 + a2 f1 + a3 f2))
/// with a1 = f2 f4 - f3^2, a2 = f2 f3 - f1 f4, a3 = f1 f3 - f2^2. They are
/// computed in the basis centred at the kernel-weighted mean offset, which
/// leaves the Hankel determinant unchanged (unit triangular change of basis)
/// and avoids the cancellation in f0 f2 - f1^2 when the window is narrow.
template <typename Scalar>
LocalWeights<Scalar> local_weights(const Sample<Scalar>& sample, Scalar x,
                                   const EstimatorConfig<Scalar>& cfg) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  cfg.validate();
  const int p = cfg.order;
  const Scalar h = cfg.bandwidth;
  const Scalar nh = Scalar(sample.size()) * h;
  const Array u = detail::scaled_offsets(sample, x, h);
  const Array k = eval(cfg.kernel, u);

  const Scalar f0 = k.sum() / nh;
  if (!(f0 > cfg.denom_tol))
    throw InsufficientLocalData("no kernel mass at x = " + std::to_string(double(x)));

  LocalWeights<Scalar> lw;
  lw.x = x;
  lw.order = p;
  for (Eigen::Index i = 0; i < k.size(); ++i)
    if (k[i] > Scalar(0)) lw.window.push_back(i);

  if (p == 0) {
    lw.weights = (k / (nh * f0)).matrix();
    return lw;
  }

  const Scalar ubar = (k * u).sum() / (nh * f0);
  const Array v = u - ubar;
  Scalar m[5] = {f0, Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
  Array term = k * v;
  for (int j = 2; j <= 2 * p; ++j) {
    term *= v;
    m[j] = term.sum() / nh;
  }
  const int dim = p + 1;
  Matrix hankel(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) hankel(r, c) = m[r + c];

  Scalar det = p == 1 ? m[0] * m[2] : m[0] * (m[2] * m[4] - m[3] * m[3]) - m[2] * m[2] * m[2];
  Scalar scale = f0;
  for (int j = 0; j < p; ++j) scale *= f0;
  if (!(abs(det) >= cfg.denom_tol * scale))
    throw InsufficientLocalData("singular local design at x = " + std::to_string(double(x)));

  // target: polynomial basis evaluated at u = 0, i.e. v = -ubar
  Vector<Scalar> target(dim);
  target[0] = Scalar(1);
  for (int j = 1; j < dim; ++j) target[j] = target[j - 1] * (-ubar);
  const Vector<Scalar> coef = hankel.ldlt().solve(target);

  Array poly = Array::Constant(u.size(), coef[dim - 1]);
  for (int j = dim - 2; j >= 0; --j) poly = poly * v + coef[j];
  lw.weights = (k * poly / nh).matrix();
  return lw;
}

/// Raw local polynomial estimate of F(t|x). Orders 1 and 2 may leave [0, 1].
template <typename Scalar>
Scalar cdf_estimate(const Sample<Scalar>& sample, Scalar x, Scalar t,
                    const EstimatorConfig<Scalar>& cfg) {
  const auto lw = local_weights(sample, x, cfg);
  return (sample.ys().array() <= t).select(lw.weights.array(), Scalar(0)).sum();
}

/// Running maximum followed by clipping to [0, 1].
template <typename Scalar>
CdfCurve<Scalar> monotonize(CdfCurve<Scalar> curve) {
  Scalar run = Scalar(0);
  for (Eigen::Index k = 0; k < curve.values.size(); ++k) {
    run = std::max(run, curve.values[k]);
    curve.values[k] = std::clamp(run, Scalar(0), Scalar(1));
  }
  curve.monotonized = true;
  return curve;
}

/// Tabulates the step curve from precomputed weights. Jumps are the distinct
/// in-window responses plus the global min/max responses as sentinels; tied
/// responses share one jump.
template <typename Scalar>
CdfCurve<Scalar> cdf_curve(const Sample<Scalar>& sample, const LocalWeights<Scalar>& lw,
                           bool monotonize_curve) {
  const auto& ys = sample.ys();
  std::vector<Eigen::Index> idx = lw.window;
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index a, Eigen::Index b) { return ys[a] < ys[b]; });

  std::vector<Scalar> ts;
  std::vector<Scalar> vals;
  ts.reserve(idx.size() + 2);
  vals.reserve(idx.size() + 2);
  if (idx.empty() || sample.min_y() < ys[idx.front()]) {
    ts.push_back(sample.min_y());
    vals.push_back(Scalar(0));
  }
  Scalar cum = Scalar(0);
  for (std::size_t a = 0; a < idx.size();) {
    const Scalar t = ys[idx[a]];
    while (a < idx.size() && ys[idx[a]] == t) cum += lw.weights[idx[a++]];
    ts.push_back(t);
    vals.push_back(cum);
  }
  if (ts.back() < sample.max_y()) {
    ts.push_back(sample.max_y());
    vals.push_back(cum);
  }

  CdfCurve<Scalar> curve;
  curve.x = lw.x;
  curve.order = lw.order;
  curve.jump_ts = Eigen::Map<const Vector<Scalar>>(ts.data(), Eigen::Index(ts.size()));
  curve.values = Eigen::Map<const Vector<Scalar>>(vals.data(), Eigen::Index(vals.size()));
  return monotonize_curve ? monotonize(std::move(curve)) : curve;
}

template <typename Scalar>
CdfCurve<Scalar> cdf_curve(const Sample<Scalar>& sample, Scalar x,
                           const EstimatorConfig<Scalar>& cfg, bool monotonize_curve) {
  return cdf_curve(sample, local_weights(sample, x, cfg), monotonize_curve);
}

/// m_hat(x) = int y F_hat(dy|x) = sum_i w_i Y_i.
template <typename Scalar>
Scalar regression_estimate(const Sample<Scalar>& sample, Scalar x,
                           const EstimatorConfig<Scalar>& cfg) {
  return local_weights(sample, x, cfg).weights.dot(sample.ys());
}

/// Generalized inverse inf{t : F_hat(t|x) >= alpha} over the jump points.
template <typename Scalar>
Scalar quantile_estimate(const CdfCurve<Scalar>& curve, Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha < Scalar(1)))
    throw InvalidArgument("quantile level must lie in (0, 1)");
  for (Eigen::Index k = 0; k < curve.size(); ++k)
    if (curve.values[k] >= alpha) return curve.jump_ts[k];
  throw NoCrossing("cdf curve never reaches level " + std::to_string(double(alpha)));
}

/// h_n = n^{-1/5}.
inline double reference_bandwidth(long long n) {
  if (n < 2) throw InvalidArgument("reference bandwidth needs n >= 2");
  return std::pow(double(n), -0.2);
}

}  // namespace ccdf

#endif  // CCDF_ESTIMATOR_HPP
