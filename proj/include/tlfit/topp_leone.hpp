#pragma once

// Topp-Leone-G transform and the two parent families it is applied to.
//
// For a parent law with cdf G and density g the transform gives
//   F(x) = G^alpha (2 - G)^alpha = (1 - S^2)^alpha,   S = 1 - G
//   f(x) = 2 alpha g S (1 - S^2)^(alpha - 1)
// Parents are evaluated into a ParentPoint that carries log S alongside G so
// that 1 - S^2 can be formed with expm1 instead of by cancellation.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tlfit/params.hpp"

namespace tlfit {

template <typename Scalar>
struct ParentPoint {
  Scalar cdf;      // G(x)
  Scalar log_sf;   // log(1 - G(x)), -inf at or past a finite upper endpoint
  Scalar log_pdf;  // log g(x), -inf where the density vanishes
};

/// TL transform of a plain parent probability: (g (2 - g))^alpha.
template <typename Scalar>
Scalar tl_transform_cdf(Scalar g, Scalar alpha) {
  using std::pow;
  if (!(g >= Scalar(0) && g <= Scalar(1))) throw std::domain_error("tl_transform_cdf: g outside [0, 1]");
  if (!(alpha > Scalar(0))) throw std::domain_error("tl_transform_cdf: alpha must be positive");
  return pow(g * (Scalar(2) - g), alpha);
}

/// TL transform of an evaluated parent: (-expm1(2 log S))^alpha.
template <typename Scalar>
Scalar tl_transform_cdf(const ParentPoint<Scalar>& parent, Scalar alpha) {
  using std::expm1;
  using std::pow;
  if (!(alpha > Scalar(0))) throw std::domain_error("tl_transform_cdf: alpha must be positive");
  return pow(-expm1(Scalar(2) * parent.log_sf), alpha);
}

/// TL density from a plain parent cdf value and density value.
template <typename Scalar>
Scalar tl_transform_pdf(Scalar g, Scalar parent_pdf, Scalar alpha) {
  using std::pow;
  if (!(g >= Scalar(0) && g <= Scalar(1))) throw std::domain_error("tl_transform_pdf: g outside [0, 1]");
  if (!(alpha > Scalar(0))) throw std::domain_error("tl_transform_pdf: alpha must be positive");
  return Scalar(2) * alpha * parent_pdf * (Scalar(1) - g) * pow(g * (Scalar(2) - g), alpha - Scalar(1));
}

template <typename Scalar>
Scalar tl_transform_pdf(const ParentPoint<Scalar>& parent, Scalar alpha) {
  using std::exp;
  using std::expm1;
  using std::pow;
  if (!(alpha > Scalar(0))) throw std::domain_error("tl_transform_pdf: alpha must be positive");
  const Scalar head = exp(parent.log_pdf + parent.log_sf);
  if (head == Scalar(0)) return Scalar(0);
  return Scalar(2) * alpha * head * pow(-expm1(Scalar(2) * parent.log_sf), alpha - Scalar(1));
}

/// Exponential parent, G(x) = 1 - exp(-lambda x).
template <typename Scalar>
ParentPoint<Scalar> exponential_parent(Scalar x, Scalar lambda) {
  using std::expm1;
  using std::log;
  const Scalar log_sf = -(lambda * x);
  return {-expm1(log_sf), log_sf, log(lambda) + log_sf};
}

/// q-exponential parent, G(x) = 1 - [1 - (1 - q) lambda x]^((2 - q)/(1 - q)).
/// Falls back to the exponential parent when |1 - q| < kQOneTolerance.
template <typename Scalar>
ParentPoint<Scalar> qexponential_parent(Scalar x, Scalar lambda, Scalar q) {
  using std::abs;
  using std::expm1;
  using std::log;
  using std::log1p;
  const Scalar eps = Scalar(1) - q;
  if (abs(eps) < Scalar(kQOneTolerance)) return exponential_parent(x, lambda);
  const Scalar z = eps * lambda * x;
  if (z >= Scalar(1)) {
    // At or past the finite endpoint 1/((1 - q) lambda).
    const Scalar ninf = -std::numeric_limits<Scalar>::infinity();
    return {Scalar(1), ninf, ninf};
  }
  const Scalar log_psi = log1p(-z);
  const Scalar log_sf = (Scalar(2) - q) / eps * log_psi;
  return {-expm1(log_sf), log_sf, log((Scalar(2) - q) * lambda) + log_psi / eps};
}

}  // namespace tlfit
