#pragma once

// Minimum-distance objectives (least squares, weighted least squares,
// Cramer-von Mises, Anderson-Darling) and the negative log-likelihood for the
// TLE and TLqE laws, evaluated on order statistics with analytic gradients.
//
// All objectives are built from per-observation log terms of the model cdf
//   log F_i = alpha * log B_i,   B_i = 1 - S_i^2,
// where S_i is the parent survival at x_(i). Gradients are taken with respect
// to the natural coordinates in the order (lambda, alpha[, q]).
//
// The gradients are derived from the objective definitions:
//   d/dtheta sum w_i (F_i - p_i)^2 = sum 2 w_i (F_i - p_i) F_i dlogF_i/dtheta
//   dlogF/dalpha = log B,   dlogF/dtheta = -2 alpha S^2/B dlogS/dtheta
// and for the q-exponential parent with psi = 1 - (1 - q) lambda x:
//   log S = (2 - q)/(1 - q) log psi
//   dlogS/dlambda = -(2 - q) x / psi
//   dlogS/dq      = log psi/(1 - q)^2 + (2 - q)/(1 - q) lambda x / psi
// (at q = 1 the last one tends to lambda x + (lambda x)^2 / 2).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "tlfit/params.hpp"
#include "tlfit/sorted_sample.hpp"

namespace tlfit {

enum class ObjectiveKind { kLs, kWls, kCvm, kAd };

std::string_view to_string(ObjectiveKind kind);

enum class GradientMode { kValueOnly, kWithGradient };

template <typename Scalar>
struct BasicObjectiveValue {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar value = std::numeric_limits<Scalar>::infinity();
  Vector gradient;  // empty when not requested or infeasible
  bool feasible = false;

  static BasicObjectiveValue infeasible() { return {}; }
};

using ObjectiveValue = BasicObjectiveValue<double>;

namespace detail {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Per-observation terms shared by every objective.
template <typename Scalar>
struct ModelTerms {
  bool feasible = false;
  bool has_q = false;
  Scalar alpha{};
  ArrayX<Scalar> log_b;         // log B_i
  ArrayX<Scalar> dlog_b_lambda;  // d log B_i / d lambda
  ArrayX<Scalar> dlog_b_q;       // d log B_i / d q (TLqE only)
  // log(g_i S_i) of the parent and its partials; only filled for densities.
  ArrayX<Scalar> log_gs;
  ArrayX<Scalar> dlog_gs_lambda;
  ArrayX<Scalar> dlog_gs_q;
};

/// Fills log_b and its partials from the parent log survival and its partials.
template <typename Scalar>
void finish_terms(ModelTerms<Scalar>& t, const ArrayX<Scalar>& log_s, const ArrayX<Scalar>* dlog_s_lambda,
                  const ArrayX<Scalar>* dlog_s_q) {
  const ArrayX<Scalar> two_log_s = Scalar(2) * log_s;
  // B = -expm1(2 log S) is accurate to a few ulps everywhere, so log B has
  // full absolute accuracy, which is all F = B^alpha and its partials need.
  const ArrayX<Scalar> b = -two_log_s.expm1();
  t.log_b = b.log();
  if (dlog_s_lambda == nullptr) return;
  const ArrayX<Scalar> s2 = two_log_s.exp();
  // S^2 / B is infinite at x = 0 where B = 0; those rows carry zero weight in
  // every objective and are masked there.
  const ArrayX<Scalar> ratio = s2 / b;
  t.dlog_b_lambda = Scalar(-2) * ratio * (*dlog_s_lambda);
  if (dlog_s_q != nullptr) t.dlog_b_q = Scalar(-2) * ratio * (*dlog_s_q);
}

template <typename Scalar>
ModelTerms<Scalar> model_terms(const BasicSortedSample<Scalar>& s, const BasicTleParams<Scalar>& p, bool derivatives,
                               bool density) {
  ModelTerms<Scalar> t;
  t.feasible = true;
  t.alpha = p.alpha;
  const ArrayX<Scalar>& x = s.values();
  const ArrayX<Scalar> log_s = -p.lambda * x;
  const ArrayX<Scalar> dlog_s_lambda = -x;
  finish_terms<Scalar>(t, log_s, derivatives ? &dlog_s_lambda : nullptr, nullptr);
  if (density) {
    using std::log;
    t.log_gs = log(p.lambda) - Scalar(2) * p.lambda * x;
    if (derivatives) t.dlog_gs_lambda = Scalar(1) / p.lambda - Scalar(2) * x;
  }
  return t;
}

template <typename Scalar>
ModelTerms<Scalar> model_terms(const BasicSortedSample<Scalar>& s, const BasicTlqeParams<Scalar>& p, bool derivatives,
                               bool density) {
  using std::log;
  ModelTerms<Scalar> t;
  t.alpha = p.alpha;
  t.has_q = true;
  const ArrayX<Scalar>& x = s.values();
  const Scalar lambda = p.lambda;
  const Scalar q = p.q;

  if (p.near_exponential_limit()) {
    // Exponential limit; the q partials are the q -> 1 limits.
    t.feasible = true;
    const ArrayX<Scalar> lx = lambda * x;
    const ArrayX<Scalar> log_s = -lx;
    if (derivatives) {
      const ArrayX<Scalar> dlog_s_lambda = -x;
      const ArrayX<Scalar> dlog_s_q = lx + Scalar(0.5) * lx.square();
      finish_terms<Scalar>(t, log_s, &dlog_s_lambda, &dlog_s_q);
    } else {
      finish_terms<Scalar>(t, log_s, nullptr, nullptr);
    }
    if (density) {
      t.log_gs = log(lambda) - Scalar(2) * lx;
      if (derivatives) {
        t.dlog_gs_lambda = Scalar(1) / lambda - Scalar(2) * x;
        t.dlog_gs_q = Scalar(-1) + lx + lx.square();
      }
    }
    return t;
  }

  const Scalar eps = Scalar(1) - q;
  // Bounded support for q < 1: every observation must satisfy psi > 0.
  if (eps > Scalar(0) && eps * lambda * s.max() >= Scalar(1)) return t;
  t.feasible = true;

  const ArrayX<Scalar> lx = lambda * x;
  const ArrayX<Scalar> log_psi = (-eps * lx).log1p();
  const Scalar a = (Scalar(2) - q) / eps;
  const ArrayX<Scalar> log_s = a * log_psi;
  ArrayX<Scalar> psi;
  if (derivatives) {
    psi = Scalar(1) - eps * lx;
    const ArrayX<Scalar> dlog_s_lambda = -(Scalar(2) - q) * x / psi;
    const ArrayX<Scalar> dlog_s_q = log_psi / (eps * eps) + a * lx / psi;
    finish_terms<Scalar>(t, log_s, &dlog_s_lambda, &dlog_s_q);
  } else {
    finish_terms<Scalar>(t, log_s, nullptr, nullptr);
  }
  if (density) {
    const Scalar c = (Scalar(3) - q) / eps;
    t.log_gs = log(Scalar(2) - q) + log(lambda) + c * log_psi;
    if (derivatives) {
      t.dlog_gs_lambda = Scalar(1) / lambda - (Scalar(3) - q) * x / psi;
      t.dlog_gs_q = Scalar(-1) / (Scalar(2) - q) + Scalar(2) * log_psi / (eps * eps) + c * lx / psi;
    }
  }
  return t;
}

/// Assembles sum_i c_i * grad log F_i, skipping rows with c_i = 0.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> contract(const ModelTerms<Scalar>& t, const ArrayX<Scalar>& c) {
  const auto live = c != Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(t.has_q ? 3 : 2);
  g(0) = t.alpha * live.select(c * t.dlog_b_lambda, Scalar(0)).sum();
  g(1) = live.select(c * t.log_b, Scalar(0)).sum();
  if (t.has_q) g(2) = t.alpha * live.select(c * t.dlog_b_q, Scalar(0)).sum();
  return g;
}

/// Weighted squared distance sum_i w_i (F_i - p_i)^2 plus a constant.
template <typename Scalar>
BasicObjectiveValue<Scalar> squared_distance(const ModelTerms<Scalar>& t, const ArrayX<Scalar>& weights,
                                             const ArrayX<Scalar>& positions, Scalar offset, GradientMode mode) {
  BasicObjectiveValue<Scalar> out;
  out.feasible = true;
  const ArrayX<Scalar> f = (t.alpha * t.log_b).exp();
  const ArrayX<Scalar> resid = f - positions;
  out.value = offset + (weights * resid.square()).sum();
  if (mode == GradientMode::kWithGradient) {
    out.gradient = contract<Scalar>(t, Scalar(2) * weights * resid * f);
  }
  return out;
}

}  // namespace detail

/// Smallest positive normal double; Anderson-Darling clamps F and 1 - F to
/// [kAdFloor, 1 - kAdFloor] so the logs stay finite.
inline constexpr double kAdFloor = std::numeric_limits<double>::min();

/// LS: sum_i [F(x_(i)) - i/(n+1)]^2
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> ls_value(const BasicSortedSample<Scalar>& s, const Params& p,
                                     GradientMode mode = GradientMode::kWithGradient) {
  const auto t = detail::model_terms(s, p, mode == GradientMode::kWithGradient, false);
  if (!t.feasible) return BasicObjectiveValue<Scalar>::infeasible();
  const Eigen::Index n = s.size();
  const detail::ArrayX<Scalar> pos = detail::ArrayX<Scalar>::LinSpaced(n, Scalar(1), Scalar(n)) / Scalar(n + 1);
  return detail::squared_distance<Scalar>(t, detail::ArrayX<Scalar>::Ones(n), pos, Scalar(0), mode);
}

/// WLS: sum_i (n+1)^2 (n+2) / (i (n-i+1)) [F(x_(i)) - i/(n+1)]^2
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> wls_value(const BasicSortedSample<Scalar>& s, const Params& p,
                                      GradientMode mode = GradientMode::kWithGradient) {
  const auto t = detail::model_terms(s, p, mode == GradientMode::kWithGradient, false);
  if (!t.feasible) return BasicObjectiveValue<Scalar>::infeasible();
  const Eigen::Index n = s.size();
  const Scalar np1 = Scalar(n + 1);
  const detail::ArrayX<Scalar> i = detail::ArrayX<Scalar>::LinSpaced(n, Scalar(1), Scalar(n));
  const detail::ArrayX<Scalar> w = np1 * np1 * Scalar(n + 2) / (i * (np1 - i));
  return detail::squared_distance<Scalar>(t, w, i / np1, Scalar(0), mode);
}

/// CvM: 1/(12 n) + sum_i [F(x_(i)) - (2i-1)/(2n)]^2
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> cvm_value(const BasicSortedSample<Scalar>& s, const Params& p,
                                      GradientMode mode = GradientMode::kWithGradient) {
  const auto t = detail::model_terms(s, p, mode == GradientMode::kWithGradient, false);
  if (!t.feasible) return BasicObjectiveValue<Scalar>::infeasible();
  const Eigen::Index n = s.size();
  const detail::ArrayX<Scalar> pos =
      (Scalar(2) * detail::ArrayX<Scalar>::LinSpaced(n, Scalar(1), Scalar(n)) - Scalar(1)) / Scalar(2 * n);
  return detail::squared_distance<Scalar>(t, detail::ArrayX<Scalar>::Ones(n), pos, Scalar(1) / Scalar(12 * n),
                                          mode);
}

/// AD: -n - (1/n) sum_i (2i-1) {log F(x_(i)) + log[1 - F(x_(n+1-i))]}
///
/// Regrouped per observation j the survival term carries weight 2(n-j)+1.
/// A clamped log contributes a constant, so its gradient term is zero.
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> ad_value(const BasicSortedSample<Scalar>& s, const Params& p,
                                     GradientMode mode = GradientMode::kWithGradient) {
  using detail::ArrayX;
  const auto t = detail::model_terms(s, p, mode == GradientMode::kWithGradient, false);
  if (!t.feasible) return BasicObjectiveValue<Scalar>::infeasible();
  const Eigen::Index n = s.size();
  const Scalar floor = Scalar(kAdFloor);
  const Scalar log_floor = std::log(floor);

  const ArrayX<Scalar> log_f = t.alpha * t.log_b;
  const ArrayX<Scalar> f = log_f.exp();
  const ArrayX<Scalar> sf = -log_f.expm1();
  const auto f_live = log_f > log_floor;
  const auto sf_live = sf > floor;
  const ArrayX<Scalar> log_f_c = f_live.select(log_f, log_floor);
  const ArrayX<Scalar> log_sf_c = sf_live.select(sf.log(), log_floor);

  const ArrayX<Scalar> i = ArrayX<Scalar>::LinSpaced(n, Scalar(1), Scalar(n));
  const ArrayX<Scalar> w_f = Scalar(2) * i - Scalar(1);
  const ArrayX<Scalar> w_sf = Scalar(2) * (Scalar(n) - i) + Scalar(1);

  BasicObjectiveValue<Scalar> out;
  out.feasible = true;
  out.value = -Scalar(n) - ((w_f * log_f_c).sum() + (w_sf * log_sf_c).sum()) / Scalar(n);
  if (mode == GradientMode::kWithGradient) {
    // d log(1 - F) = -(F / (1 - F)) d log F
    const ArrayX<Scalar> c_f = f_live.select(w_f, Scalar(0));
    const ArrayX<Scalar> c_sf = (sf_live && f > Scalar(0)).select(-w_sf * f / sf, Scalar(0));
    out.gradient = detail::contract<Scalar>(t, -(c_f + c_sf) / Scalar(n));
  }
  return out;
}

/// Dispatches on `kind`.
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> evaluate(ObjectiveKind kind, const BasicSortedSample<Scalar>& s, const Params& p,
                                     GradientMode mode = GradientMode::kWithGradient) {
  switch (kind) {
    case ObjectiveKind::kLs: return ls_value(s, p, mode);
    case ObjectiveKind::kWls: return wls_value(s, p, mode);
    case ObjectiveKind::kCvm: return cvm_value(s, p, mode);
    case ObjectiveKind::kAd: return ad_value(s, p, mode);
  }
  throw std::logic_error("unknown objective kind");
}

/// Analytic gradient of `kind` at p; empty when p is infeasible for s.
template <typename Scalar, typename Params>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gradient(ObjectiveKind kind, const BasicSortedSample<Scalar>& s,
                                                  const Params& p) {
  return evaluate(kind, s, p, GradientMode::kWithGradient).gradient;
}

/// -sum_i log f(x_(i)) with
///   log f = log(2 alpha) + log(g S) + (alpha - 1) log B.
/// A non-finite total (an observation where the density is 0 or unbounded)
/// is reported as infeasible.
template <typename Scalar, typename Params>
BasicObjectiveValue<Scalar> negative_log_likelihood(const BasicSortedSample<Scalar>& s, const Params& p,
                                                    GradientMode mode = GradientMode::kWithGradient) {
  using detail::ArrayX;
  using std::log;
  const auto t = detail::model_terms(s, p, mode == GradientMode::kWithGradient, true);
  if (!t.feasible) return BasicObjectiveValue<Scalar>::infeasible();
  const Eigen::Index n = s.size();
  const Scalar am1 = t.alpha - Scalar(1);
  // (alpha - 1) log B with the alpha = 1 case exact even where log B = -inf.
  const ArrayX<Scalar> shape_term = am1 == Scalar(0) ? ArrayX<Scalar>::Zero(n) : ArrayX<Scalar>(am1 * t.log_b);
  const Scalar total = Scalar(n) * log(Scalar(2) * t.alpha) + t.log_gs.sum() + shape_term.sum();
  if (!std::isfinite(static_cast<double>(total))) return BasicObjectiveValue<Scalar>::infeasible();

  BasicObjectiveValue<Scalar> out;
  out.feasible = true;
  out.value = -total;
  if (mode == GradientMode::kWithGradient) {
    out.gradient.resize(t.has_q ? 3 : 2);
    const bool shaped = am1 != Scalar(0);
    out.gradient(0) = -(t.dlog_gs_lambda.sum() + (shaped ? am1 * t.dlog_b_lambda.sum() : Scalar(0)));
    out.gradient(1) = -(Scalar(n) / t.alpha + t.log_b.sum());
    if (t.has_q) out.gradient(2) = -(t.dlog_gs_q.sum() + (shaped ? am1 * t.dlog_b_q.sum() : Scalar(0)));
  }
  return out;
}

}  // namespace tlfit
