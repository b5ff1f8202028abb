#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace tlfit {

/// Deformation values with |1 - q| below this are evaluated on the
/// exponential (q -> 1) limit path.
inline constexpr double kQOneTolerance = 1e-8;

enum class DistKind { kTle, kTlqe };

std::string_view to_string(DistKind kind);
DistKind parse_dist_kind(std::string_view name);

/// Shape `alpha` and rate `lambda` of the Topp-Leone exponential law,
/// F(x) = (1 - exp(-2 lambda x))^alpha.
template <typename Scalar>
struct BasicTleParams {
  using Vector = Eigen::Matrix<Scalar, 2, 1>;

  Scalar alpha;
  Scalar lambda;

  BasicTleParams(Scalar alpha_, Scalar lambda_) : alpha(alpha_), lambda(lambda_) {
    if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha)))
      throw std::invalid_argument("alpha must be a finite positive number");
    if (!(lambda > Scalar(0)) || !std::isfinite(static_cast<double>(lambda)))
      throw std::invalid_argument("lambda must be a finite positive number");
  }

  /// Natural coordinates in gradient order: (lambda, alpha).
  Vector to_vector() const { return Vector(lambda, alpha); }

  template <typename Derived>
  static BasicTleParams from_vector(const Eigen::MatrixBase<Derived>& v) {
    return BasicTleParams(v(1), v(0));
  }

  static constexpr int dimension() { return 2; }
};

/// Shape `alpha`, rate `lambda` and deformation `q < 2` of the Topp-Leone
/// q-exponential law. q = 1 is the exponential limit.
template <typename Scalar>
struct BasicTlqeParams {
  using Vector = Eigen::Matrix<Scalar, 3, 1>;

  Scalar alpha;
  Scalar lambda;
  Scalar q;

  BasicTlqeParams(Scalar alpha_, Scalar lambda_, Scalar q_) : alpha(alpha_), lambda(lambda_), q(q_) {
    if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha)))
      throw std::invalid_argument("alpha must be a finite positive number");
    if (!(lambda > Scalar(0)) || !std::isfinite(static_cast<double>(lambda)))
      throw std::invalid_argument("lambda must be a finite positive number");
    // (2 - q) normalises the density; it vanishes at q = 2.
    if (!(q < Scalar(2)) || !std::isfinite(static_cast<double>(q)))
      throw std::invalid_argument("q must be a finite number below 2");
  }

  bool near_exponential_limit() const {
    using std::abs;
    return abs(Scalar(1) - q) < Scalar(kQOneTolerance);
  }

  /// Natural coordinates in gradient order: (lambda, alpha, q).
  Vector to_vector() const { return Vector(lambda, alpha, q); }

  template <typename Derived>
  static BasicTlqeParams from_vector(const Eigen::MatrixBase<Derived>& v) {
    return BasicTlqeParams(v(1), v(0), v(2));
  }

  static constexpr int dimension() { return 3; }
};

using TleParams = BasicTleParams<double>;
using TlqeParams = BasicTlqeParams<double>;

/// Runtime-selected parameter record.
using DistParams = std::variant<TleParams, TlqeParams>;

inline DistKind kind_of(const DistParams& p) {
  return std::holds_alternative<TleParams>(p) ? DistKind::kTle : DistKind::kTlqe;
}

/// Closed interval [lower, upper]; upper may be +infinity.
template <typename Scalar>
struct BasicSupport {
  Scalar lower = Scalar(0);
  Scalar upper = std::numeric_limits<Scalar>::infinity();

  bool bounded() const { return std::isfinite(static_cast<double>(upper)); }
  bool contains(Scalar x) const { return x >= lower && x <= upper; }
};

using Support = BasicSupport<double>;

}  // namespace tlfit
