#include "tlfit/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace tlfit {

namespace {

DistParams params_from_vector(DistKind kind, const Eigen::VectorXd& theta) {
  if (kind == DistKind::kTle) return TleParams::from_vector(theta);
  return TlqeParams::from_vector(theta);
}

ObjectiveValue evaluate_method(Method method, const SortedSample& s, const DistParams& p, GradientMode mode) {
  return std::visit(
      [&](const auto& params) -> ObjectiveValue {
        switch (method) {
          case Method::kLs: return ls_value(s, params, mode);
          case Method::kWls: return wls_value(s, params, mode);
          case Method::kCvm: return cvm_value(s, params, mode);
          case Method::kAd: return ad_value(s, params, mode);
          case Method::kMl: return negative_log_likelihood(s, params, mode);
        }
        throw std::logic_error("unknown method");
      },
      p);
}

FitResult run_fit(const SortedSample& sample, DistKind kind, Method method, const OptimizerConfig& cfg) {
  if (static_cast<std::size_t>(sample.size()) < kMinFitSize)
    throw std::invalid_argument("fitting needs at least " + std::to_string(kMinFitSize) + " observations, got " +
                                std::to_string(sample.size()));
  const ParamSpace space(kind);
  const Objective objective = [&](const Eigen::VectorXd& theta) {
    return evaluate_method(method, sample, params_from_vector(kind, theta), GradientMode::kValueOnly);
  };
  const auto guesses = default_initial_guesses(sample, kind, cfg);
  const OptimizeOutcome outcome = minimize(objective, space, cfg, guesses);

  FitResult r{params_from_vector(kind, outcome.best_point)};
  r.objective_value = outcome.best_value;
  r.method = method;
  r.converged = outcome.converged && std::isfinite(outcome.best_value);
  r.n = static_cast<std::size_t>(sample.size());
  r.iterations = outcome.iterations_used;
  r.starts_tried = outcome.starts_tried;
  r.per_start_values = outcome.per_start_values;

  const ObjectiveValue at_best = evaluate_method(method, sample, r.params, GradientMode::kWithGradient);
  const Eigen::VectorXd u = space.to_unconstrained(outcome.best_point);
  r.stationarity_norm =
      at_best.feasible ? at_best.gradient.cwiseProduct(space.jacobian_diagonal(u)).norm()
                       : std::numeric_limits<double>::infinity();
  return r;
}

FitResult fit_with(const FitRequest& req, Method method) {
  FitResult r = run_fit(req.sample, req.distribution, method, req.optimizer);
  if (req.distribution == DistKind::kTlqe) {
    const auto& p = std::get<TlqeParams>(r.params);
    if (std::abs(p.q - 1.0) < kQSnapTolerance) {
      FitResult limit = run_fit(req.sample, DistKind::kTle, method, req.optimizer);
      const auto& e = std::get<TleParams>(limit.params);
      limit.params = TlqeParams(e.alpha, e.lambda, 1.0);
      limit.iterations += r.iterations;
      return limit;
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kLs: return "ls";
    case Method::kWls: return "wls";
    case Method::kCvm: return "cvm";
    case Method::kAd: return "ad";
    case Method::kMl: return "ml";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected ls, wls, cvm, ad or ml)");
}

ObjectiveValue method_objective(Method method, const SortedSample& s, const DistParams& p, GradientMode mode) {
  return evaluate_method(method, s, p, mode);
}

FitResult fit(const FitRequest& req) { return fit_with(req, req.method); }

FitResult fit_mle(const FitRequest& req) { return fit_with(req, Method::kMl); }

}  // namespace tlfit
