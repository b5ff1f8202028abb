#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "tlfit/objectives.hpp"
#include "tlfit/params.hpp"
#include "tlfit/sorted_sample.hpp"

namespace tlfit {

struct OptimizerConfig {
  int max_iterations = 2000;  // per start
  double value_tolerance = 1e-10;
  double point_tolerance = 1e-8;
  int starts = 8;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

/// Smooth bijection between unconstrained R^d and the parameter region, in
/// the natural coordinate order (lambda, alpha[, q]):
///   lambda = exp(u0), alpha = exp(u1), q = q_lo + (q_hi - q_lo) * logistic(u2)
/// with q_lo = -5 and q_hi = 2 - 1e-3.
class ParamSpace {
 public:
  static constexpr double kQLower = -5.0;
  static constexpr double kQUpper = 2.0 - 1e-3;

  explicit ParamSpace(DistKind kind) : kind_(kind) {}

  DistKind kind() const { return kind_; }
  int dimension() const { return kind_ == DistKind::kTle ? 2 : 3; }

  Eigen::VectorXd to_constrained(const Eigen::VectorXd& u) const;
  /// Points outside the region are pulled just inside it first.
  Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const;
  /// d theta_k / d u_k at u.
  Eigen::VectorXd jacobian_diagonal(const Eigen::VectorXd& u) const;

 private:
  DistKind kind_;
};

struct OptimizeOutcome {
  Eigen::VectorXd best_point;  // natural coordinates
  double best_value = 0.0;
  bool converged = false;
  int iterations_used = 0;  // summed over starts
  int starts_tried = 0;
  std::vector<double> per_start_values;  // +inf for an infeasible start
  std::vector<bool> per_start_converged;
};

class NoFeasibleStart : public std::runtime_error {
 public:
  NoFeasibleStart() : std::runtime_error("no initial guess has a finite objective value") {}
};

/// Callable from natural coordinates to an objective value; infeasible points
/// must come back with value = +inf.
using Objective = std::function<ObjectiveValue(const Eigen::VectorXd&)>;

/// Multi-start Nelder-Mead in the unconstrained coordinates of `space`.
///
/// Each start runs until the simplex value spread is within
/// value_tolerance * max(1, |f_best|) and every vertex lies within
/// point_tolerance (max norm) of the best vertex, or max_iterations is hit.
/// The best start is the lowest value, ties going to the earlier start;
/// `converged` reports whether that start converged.
OptimizeOutcome minimize(const Objective& objective, const ParamSpace& space, const OptimizerConfig& cfg,
                         const std::vector<Eigen::VectorXd>& initial_guesses);

/// cfg.starts feasible guesses: moment-matched anchors (alpha = 1, lambda
/// from the sample median; q = 0.5 and q = 1.5 for TLqE) followed by
/// log-space jitter drawn from cfg.seed.
std::vector<Eigen::VectorXd> default_initial_guesses(const SortedSample& s, DistKind kind,
                                                     const OptimizerConfig& cfg);

}  // namespace tlfit
