#pragma once

// Closed-form cdf, pdf, quantile and support of the Topp-Leone exponential
// (TLE) and Topp-Leone q-exponential (TLqE) laws, plus inverse-transform
// sampling. Scalar overloads are templates; the DistParams overloads dispatch
// at run time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>

#include <Eigen/Core>

#include "tlfit/params.hpp"
#include "tlfit/sorted_sample.hpp"
#include "tlfit/topp_leone.hpp"

namespace tlfit {

namespace detail {

template <typename Scalar>
void require_nonnegative(Scalar x, const char* what) {
  if (!(x >= Scalar(0))) throw std::domain_error(std::string(what) + ": x must be nonnegative");
}

template <typename Scalar>
void require_open_unit(Scalar u, const char* what) {
  if (!(u > Scalar(0) && u < Scalar(1))) throw std::domain_error(std::string(what) + ": u must lie in (0, 1)");
}

/// log(1 - u^(1/alpha)) without forming u^(1/alpha) near 1.
template <typename Scalar>
Scalar log_one_minus_root(Scalar u, Scalar alpha) {
  using std::expm1;
  using std::log;
  return log(-expm1(log(u) / alpha));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Support

template <typename Scalar>
BasicSupport<Scalar> support(const BasicTleParams<Scalar>&) {
  return {};
}

/// [0, 1/((1 - q) lambda)] for q < 1, [0, inf) otherwise.
template <typename Scalar>
BasicSupport<Scalar> support(const BasicTlqeParams<Scalar>& p) {
  BasicSupport<Scalar> s;
  if (p.q < Scalar(1)) s.upper = Scalar(1) / ((Scalar(1) - p.q) * p.lambda);
  return s;
}

// ---------------------------------------------------------------------------
// TLE

template <typename Scalar>
Scalar cdf(Scalar x, const BasicTleParams<Scalar>& p) {
  detail::require_nonnegative(x, "cdf_tle");
  return tl_transform_cdf(exponential_parent(x, p.lambda), p.alpha);
}

template <typename Scalar>
Scalar pdf(Scalar x, const BasicTleParams<Scalar>& p) {
  detail::require_nonnegative(x, "pdf_tle");
  return tl_transform_pdf(exponential_parent(x, p.lambda), p.alpha);
}

/// -log(1 - u^(1/alpha)) / (2 lambda)
template <typename Scalar>
Scalar quantile(Scalar u, const BasicTleParams<Scalar>& p) {
  detail::require_open_unit(u, "quantile_tle");
  return -detail::log_one_minus_root(u, p.alpha) / (Scalar(2) * p.lambda);
}

// ---------------------------------------------------------------------------
// TLqE

/// Returns exactly 1 at and beyond a finite upper endpoint.
template <typename Scalar>
Scalar cdf(Scalar x, const BasicTlqeParams<Scalar>& p) {
  detail::require_nonnegative(x, "cdf_tlqe");
  return tl_transform_cdf(qexponential_parent(x, p.lambda, p.q), p.alpha);
}

/// Defined on the closed support; a finite upper endpoint gets the one-sided
/// limit, which is 0 because (3 - q)/(1 - q) > 0 there.
template <typename Scalar>
Scalar pdf(Scalar x, const BasicTlqeParams<Scalar>& p) {
  detail::require_nonnegative(x, "pdf_tlqe");
  const auto s = support(p);
  if (x > s.upper) throw std::domain_error("pdf_tlqe: x outside the support");
  if (x == s.upper) return Scalar(0);
  return tl_transform_pdf(qexponential_parent(x, p.lambda, p.q), p.alpha);
}

/// Inverts cdf(x) = u: psi = (1 - u^(1/alpha))^((1 - q)/(2(2 - q))),
/// x = (1 - psi)/((1 - q) lambda).
template <typename Scalar>
Scalar quantile(Scalar u, const BasicTlqeParams<Scalar>& p) {
  using std::expm1;
  detail::require_open_unit(u, "quantile_tlqe");
  if (p.near_exponential_limit()) return quantile(u, BasicTleParams<Scalar>(p.alpha, p.lambda));
  const Scalar eps = Scalar(1) - p.q;
  const Scalar k = eps / (Scalar(2) * (Scalar(2) - p.q));
  const Scalar x = -expm1(k * detail::log_one_minus_root(u, p.alpha)) / (eps * p.lambda);
  // Rounding must not push a bounded-support draw past the endpoint.
  return eps > Scalar(0) ? std::min(x, support(p).upper) : x;
}

// ---------------------------------------------------------------------------
// Element-wise forms over Eigen arrays.

template <typename Derived, typename Params>
auto cdf(const Eigen::ArrayBase<Derived>& x, const Params& p) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([p](Scalar v) { return cdf(v, p); }).eval();
}

template <typename Derived, typename Params>
auto pdf(const Eigen::ArrayBase<Derived>& x, const Params& p) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([p](Scalar v) { return pdf(v, p); }).eval();
}

template <typename Derived, typename Params>
auto quantile(const Eigen::ArrayBase<Derived>& u, const Params& p) {
  using Scalar = typename Derived::Scalar;
  return u.unaryExpr([p](Scalar v) { return quantile(v, p); }).eval();
}

// ---------------------------------------------------------------------------
// Run-time dispatch.

inline double cdf(double x, const DistParams& p) {
  return std::visit([x](const auto& q) { return cdf(x, q); }, p);
}
inline double pdf(double x, const DistParams& p) {
  return std::visit([x](const auto& q) { return pdf(x, q); }, p);
}
inline double quantile(double u, const DistParams& p) {
  return std::visit([u](const auto& q) { return quantile(u, q); }, p);
}
inline Support support(const DistParams& p) {
  return std::visit([](const auto& q) { return support(q); }, p);
}

/// Inverse-transform sample of size n: draw i is quantile(CounterRng(seed).uniform(i)).
SortedSample sample(std::size_t n, const DistParams& p, std::uint64_t seed);

}  // namespace tlfit
