#ifndef CCDF_SAMPLE_HPP
#define CCDF_SAMPLE_HPP

#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ccdf/errors.hpp"

namespace ccdf {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Immutable paired observations (X_i, Y_i).
template <typename Scalar = double>
class Sample {
 public:
  using VectorType = Vector<Scalar>;

  Sample(VectorType xs, VectorType ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw InvalidArgument("sample: xs and ys differ in length");
    if (xs_.size() == 0) throw InvalidArgument("sample: at least one observation is required");
    if (!xs_.allFinite() || !ys_.allFinite()) throw InvalidArgument("sample: non-finite entry");
    min_y_ = ys_.minCoeff();
    max_y_ = ys_.maxCoeff();
  }

  Sample(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys)
      : Sample(Eigen::Map<const VectorType>(xs.data(), Eigen::Index(xs.size())),
               Eigen::Map<const VectorType>(ys.data(), Eigen::Index(ys.size()))) {
  }

  Sample(std::initializer_list<Scalar> xs, std::initializer_list<Scalar> ys)
      : Sample(std::vector<Scalar>(xs), std::vector<Scalar>(ys)) {}

  const VectorType& xs() const noexcept { return xs_; }
  const VectorType& ys() const noexcept { return ys_; }
  Eigen::Index size() const noexcept { return xs_.size(); }
  Scalar min_y() const noexcept { return min_y_; }
  Scalar max_y() const noexcept { return max_y_; }

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.xs_.size() == b.xs_.size() && a.xs_ == b.xs_ && a.ys_ == b.ys_;
  }

 private:
  VectorType xs_;
  VectorType ys_;
  Scalar min_y_{};
  Scalar max_y_{};
};

}  // namespace ccdf

#endif  // CCDF_SAMPLE_HPP
