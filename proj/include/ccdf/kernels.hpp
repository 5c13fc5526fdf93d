#ifndef CCDF_KERNELS_HPP
#define CCDF_KERNELS_HPP

#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "ccdf/errors.hpp"

namespace ccdf {

enum class KernelType { epanechnikov, uniform, gaussian };

/// Closed support [lower, upper] of a compact kernel. The uniform kernel is
/// the right-continuous indicator of [-1/2, 1/2), so its upper endpoint is
/// excluded from the support even though it bounds it.
struct Support {
  double lower;
  double upper;
};

/// Symmetric probability density used for smoothing. Constants are stored in
/// closed form; see tests/test_kernels.cpp for the quadrature cross-checks.
class Kernel {
 public:
  constexpr explicit Kernel(KernelType type = KernelType::epanechnikov) noexcept : type_(type) {}

  constexpr KernelType type() const noexcept { return type_; }

  std::string_view name() const noexcept {
    switch (type_) {
      case KernelType::epanechnikov: return "epanechnikov";
      case KernelType::uniform: return "uniform";
      case KernelType::gaussian: return "gaussian";
    }
    return "";
  }

  /// Empty for the Gaussian kernel (unbounded support).
  constexpr std::optional<Support> support() const noexcept {
    switch (type_) {
      case KernelType::epanechnikov: return Support{-1.0, 1.0};
      case KernelType::uniform: return Support{-0.5, 0.5};
      case KernelType::gaussian: return std::nullopt;
    }
    return std::nullopt;
  }

  /// Integration range used by quadrature routines; [-12, 12] stands in for
  /// the real line for the Gaussian kernel (tail mass below 1e-32).
  constexpr Support integration_range() const noexcept {
    auto s = support();
    return s ? *s : Support{-12.0, 12.0};
  }

  friend constexpr bool operator==(const Kernel&, const Kernel&) = default;

 private:
  KernelType type_;
};

/// Parses the lowercase kernel name used on the command line.
inline Kernel kernel_from_name(std::string_view name) {
  if (name == "epanechnikov") return Kernel(KernelType::epanechnikov);
  if (name == "uniform") return Kernel(KernelType::uniform);
  if (name == "gaussian") return Kernel(KernelType::gaussian);
  throw InvalidArgument("unknown kernel '" + std::string(name) +
                        "' (expected epanechnikov, uniform or gaussian)");
}

template <typename Scalar>
  requires std::floating_point<Scalar>
Scalar eval(const Kernel& kernel, Scalar u) {
  using std::abs;
  using std::exp;
  switch (kernel.type()) {
    case KernelType::epanechnikov:
      return abs(u) <= Scalar(1) ? Scalar(0.75) * (Scalar(1) - u * u) : Scalar(0);
    case KernelType::uniform:
      // right-continuous: K(-1/2) = 1, K(1/2) = 0
      return (u >= Scalar(-0.5) && u < Scalar(0.5)) ? Scalar(1) : Scalar(0);
    case KernelType::gaussian:
      return exp(-u * u / Scalar(2)) / Scalar(std::sqrt(2.0 * std::numbers::pi));
  }
  return Scalar(0);
}

/// Coefficient-wise K(u) over an Eigen array expression.
template <typename Derived>
auto eval(const Kernel& kernel, const Eigen::ArrayBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  return u.unaryExpr([kernel](Scalar v) { return eval(kernel, v); });
}

/// Integral of K^2.
inline double l2_norm_sq(const Kernel& kernel) noexcept {
  switch (kernel.type()) {
    case KernelType::epanechnikov: return 0.6;
    case KernelType::uniform: return 1.0;
    case KernelType::gaussian: return 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  }
  return 0.0;
}

/// mu_j(K) = int u^j K(u) du for j in 0..4.
inline double moment(const Kernel& kernel, int j) {
  if (j < 0 || j > 4) throw InvalidArgument("kernel moment order must lie in 0..4");
  if (j % 2 == 1) return 0.0;
  if (j == 0) return 1.0;
  switch (kernel.type()) {
    case KernelType::epanechnikov: return j == 2 ? 0.2 : 3.0 / 35.0;
    case KernelType::uniform: return j == 2 ? 1.0 / 12.0 : 1.0 / 80.0;
    case KernelType::gaussian: return j == 2 ? 1.0 : 3.0;
  }
  return 0.0;
}

}  // namespace ccdf

#endif  // CCDF_KERNELS_HPP
