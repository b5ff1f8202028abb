#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tlfit/objectives.hpp"
#include "tlfit/optimize.hpp"
#include "tlfit/params.hpp"
#include "tlfit/sorted_sample.hpp"

namespace tlfit {

/// Estimation method: one of the four minimum-distance objectives or maximum
/// likelihood (ML is a reference baseline, not a minimum-distance method).
enum class Method { kLs, kWls, kCvm, kAd, kMl };

inline constexpr Method kAllMethods[] = {Method::kLs, Method::kWls, Method::kCvm, Method::kAd, Method::kMl};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// Fits below this many observations are rejected.
inline constexpr std::size_t kMinFitSize = 3;

/// Fitted q values closer than this to 1 are reported as exactly 1.
inline constexpr double kQSnapTolerance = 1e-6;

struct FitRequest {
  SortedSample sample;
  DistKind distribution = DistKind::kTle;
  Method method = Method::kLs;
  OptimizerConfig optimizer;
};

struct FitResult {
  DistParams params;
  double objective_value = 0.0;
  Method method = Method::kLs;
  bool converged = false;
  /// Euclidean norm of the analytic gradient in the optimizer's
  /// unconstrained coordinates at the fitted point.
  double stationarity_norm = 0.0;
  std::size_t n = 0;
  int iterations = 0;
  int starts_tried = 0;
  std::vector<double> per_start_values;
};

/// The objective minimised by `method` (the negative log-likelihood for ML).
ObjectiveValue method_objective(Method method, const SortedSample& s, const DistParams& p,
                                GradientMode mode = GradientMode::kWithGradient);

/// Throws std::invalid_argument for n < 3, NoFeasibleStart when no guess is
/// feasible. Non-convergence is reported, not thrown.
FitResult fit(const FitRequest& req);

/// Maximum likelihood; `req.method` is ignored.
FitResult fit_mle(const FitRequest& req);

}  // namespace tlfit
