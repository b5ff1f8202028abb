#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace tlfit {

/// Ascending order statistics x_(1) <= ... <= x_(n) of a nonnegative sample.
template <typename Scalar>
class BasicSortedSample {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  /// Sorts a copy of `values`. Throws std::invalid_argument on an empty,
  /// negative or non-finite input.
  explicit BasicSortedSample(std::span<const Scalar> values) : values_(static_cast<Eigen::Index>(values.size())) {
    if (values.empty()) throw std::invalid_argument("sample must contain at least one observation");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Scalar v = values[i];
      if (!std::isfinite(static_cast<double>(v)) || v < Scalar(0))
        throw std::invalid_argument("sample values must be finite and nonnegative");
      values_(static_cast<Eigen::Index>(i)) = v;
    }
    std::sort(values_.begin(), values_.end());
  }

  explicit BasicSortedSample(const std::vector<Scalar>& values)
      : BasicSortedSample(std::span<const Scalar>(values.data(), values.size())) {}

  const Array& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar operator[](Eigen::Index i) const { return values_(i); }
  Scalar min() const { return values_(0); }
  Scalar max() const { return values_(values_.size() - 1); }

  Scalar median() const {
    const Eigen::Index n = size();
    return n % 2 == 1 ? values_(n / 2) : Scalar(0.5) * (values_(n / 2 - 1) + values_(n / 2));
  }

  std::vector<Scalar> to_vector() const { return {values_.begin(), values_.end()}; }

 private:
  Array values_;
};

using SortedSample = BasicSortedSample<double>;

}  // namespace tlfit
