#include "tlfit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tlfit/rng.hpp"

namespace tlfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Initial simplex edge in unconstrained coordinates.
constexpr double kSimplexStep = 0.3;
// Edge of the simplex rebuilt around a converged point.
constexpr double kRestartStep = 0.05;

constexpr std::uint64_t kGuessStream = 0x6775657373ULL;  // "guess"

double logistic(double u) {
  return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

class NelderMead {
 public:
  NelderMead(const Objective& objective, const ParamSpace& space, const OptimizerConfig& cfg)
      : objective_(objective), space_(space), cfg_(cfg), dim_(space.dimension()) {}

  struct Run {
    Eigen::VectorXd best;
    double value = kInf;
    bool converged = false;
    int iterations = 0;
  };

  Run run(const Eigen::VectorXd& start, double start_value, double step, int budget) {
    Eigen::MatrixXd x(dim_, dim_ + 1);
    Eigen::VectorXd f(dim_ + 1);
    x.col(0) = start;
    f(0) = start_value;
    for (int j = 0; j < dim_; ++j) {
      x.col(j + 1) = start;
      x(j, j + 1) += step;
      f(j + 1) = eval(x.col(j + 1));
    }

    std::vector<int> order(dim_ + 1);
    Run out;
    for (;;) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) < f(b); });
      const int best = order.front();
      const int worst = order.back();
      const int second = order[dim_ - 1];

      if (converged(x, f, best)) {
        out.converged = true;
        break;
      }
      if (out.iterations >= budget) break;
      ++out.iterations;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim_);
      for (int j = 0; j <= dim_; ++j)
        if (j != worst) centroid += x.col(j);
      centroid /= dim_;

      const Eigen::VectorXd reflected = centroid + (centroid - x.col(worst));
      const double fr = eval(reflected);
      if (fr < f(best)) {
        const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - x.col(worst));
        const double fe = eval(expanded);
        if (fe < fr) {
          x.col(worst) = expanded;
          f(worst) = fe;
        } else {
          x.col(worst) = reflected;
          f(worst) = fr;
        }
        continue;
      }
      if (fr < f(second)) {
        x.col(worst) = reflected;
        f(worst) = fr;
        continue;
      }
      if (fr < f(worst)) {
        const Eigen::VectorXd outside = centroid + 0.5 * (reflected - centroid);
        const double fo = eval(outside);
        if (fo <= fr) {
          x.col(worst) = outside;
          f(worst) = fo;
          continue;
        }
      } else {
        const Eigen::VectorXd inside = centroid + 0.5 * (x.col(worst) - centroid);
        const double fi = eval(inside);
        if (fi < f(worst)) {
          x.col(worst) = inside;
          f(worst) = fi;
          continue;
        }
      }
      for (int j = 0; j <= dim_; ++j) {
        if (j == best) continue;
        x.col(j) = x.col(best) + 0.5 * (x.col(j) - x.col(best));
        f(j) = eval(x.col(j));
      }
    }

    Eigen::Index best = 0;
    // First minimum in column order keeps the choice deterministic.
    f.minCoeff(&best);
    out.best = x.col(best);
    out.value = f(best);
    return out;
  }

 private:
  double eval(const Eigen::VectorXd& u) const {
    const double v = objective_(space_.to_constrained(u)).value;
    return std::isnan(v) ? kInf : v;
  }

  bool converged(const Eigen::MatrixXd& x, const Eigen::VectorXd& f, int best) const {
    const double fb = f(best);
    if (!std::isfinite(f.maxCoeff())) return false;
    if (f.maxCoeff() - fb > cfg_.value_tolerance * std::max(1.0, std::abs(fb))) return false;
    const double spread = (x.colwise() - x.col(best)).cwiseAbs().maxCoeff();
    return spread <= cfg_.point_tolerance;
  }

  const Objective& objective_;
  const ParamSpace& space_;
  const OptimizerConfig& cfg_;
  int dim_;
};

// Rate matching the sample median under alpha = 1:
//   median = (1 - 2^(-(1-q)/(2(2-q)))) / ((1 - q) lambda),
// with the q -> 1 limit ln 2 / (2 median).
double median_matched_rate(double median, double q) {
  const double eps = 1.0 - q;
  if (std::abs(eps) < kQOneTolerance) return std::numbers::ln2 / (2.0 * median);
  return -std::expm1(-eps / (2.0 * (2.0 - q)) * std::numbers::ln2) / (eps * median);
}

// Halves lambda until every observation sits inside a q < 1 support.
double feasible_rate(double lambda, double q, double x_max) {
  if (q >= 1.0 || std::abs(1.0 - q) < kQOneTolerance) return lambda;
  while (lambda * (1.0 - q) * x_max >= 1.0) lambda *= 0.5;
  return lambda;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
  if (!(value_tolerance > 0)) throw std::invalid_argument("value_tolerance must be positive");
  if (!(point_tolerance > 0)) throw std::invalid_argument("point_tolerance must be positive");
  if (starts <= 0) throw std::invalid_argument("starts must be positive");
}

Eigen::VectorXd ParamSpace::to_constrained(const Eigen::VectorXd& u) const {
  Eigen::VectorXd theta(dimension());
  theta(0) = std::exp(u(0));
  theta(1) = std::exp(u(1));
  if (kind_ == DistKind::kTlqe) theta(2) = kQLower + (kQUpper - kQLower) * logistic(u(2));
  return theta;
}

Eigen::VectorXd ParamSpace::to_unconstrained(const Eigen::VectorXd& theta) const {
  constexpr double tiny = std::numeric_limits<double>::min();
  Eigen::VectorXd u(dimension());
  u(0) = std::log(std::max(theta(0), tiny));
  u(1) = std::log(std::max(theta(1), tiny));
  if (kind_ == DistKind::kTlqe) {
    const double p = std::clamp((theta(2) - kQLower) / (kQUpper - kQLower), 1e-12, 1.0 - 1e-12);
    u(2) = logit(p);
  }
  return u;
}

Eigen::VectorXd ParamSpace::jacobian_diagonal(const Eigen::VectorXd& u) const {
  Eigen::VectorXd d(dimension());
  d(0) = std::exp(u(0));
  d(1) = std::exp(u(1));
  if (kind_ == DistKind::kTlqe) {
    const double s = logistic(u(2));
    d(2) = (kQUpper - kQLower) * s * (1.0 - s);
  }
  return d;
}

OptimizeOutcome minimize(const Objective& objective, const ParamSpace& space, const OptimizerConfig& cfg,
                         const std::vector<Eigen::VectorXd>& initial_guesses) {
  cfg.validate();
  if (initial_guesses.empty()) throw std::invalid_argument("minimize needs at least one initial guess");

  NelderMead nm(objective, space, cfg);
  OptimizeOutcome out;
  out.best_value = kInf;
  int best_start = -1;
  Eigen::VectorXd best_u;

  for (const auto& guess : initial_guesses) {
    if (guess.size() != space.dimension()) throw std::invalid_argument("initial guess has the wrong dimension");
    ++out.starts_tried;
    const Eigen::VectorXd u0 = space.to_unconstrained(guess);
    const double f0 = objective(space.to_constrained(u0)).value;
    if (!std::isfinite(f0)) {
      out.per_start_values.push_back(kInf);
      out.per_start_converged.push_back(false);
      continue;
    }
    auto run = nm.run(u0, f0, kSimplexStep, cfg.max_iterations);
    int used = run.iterations;
    if (run.converged) {
      // A collapsed simplex can stall off the minimum; rebuild it once.
      auto again = nm.run(run.best, run.value, kRestartStep, cfg.max_iterations - used);
      used += again.iterations;
      if (again.value <= run.value) run = again;
      run.converged = again.converged;
    }
    out.iterations_used += used;
    out.per_start_values.push_back(run.value);
    out.per_start_converged.push_back(run.converged);
    if (run.value < out.best_value) {
      out.best_value = run.value;
      best_u = run.best;
      best_start = out.starts_tried - 1;
    }
  }

  if (best_start < 0) throw NoFeasibleStart();
  out.best_point = space.to_constrained(best_u);
  out.converged = out.per_start_converged[static_cast<std::size_t>(best_start)];
  return out;
}

std::vector<Eigen::VectorXd> default_initial_guesses(const SortedSample& s, DistKind kind,
                                                     const OptimizerConfig& cfg) {
  if (s.size() < 2) throw std::invalid_argument("initial guesses need at least two observations");
  double scale = s.median();
  if (!(scale > 0)) scale = s.values().mean();
  if (!(scale > 0)) throw std::invalid_argument("sample has no positive observations");
  const double x_max = s.max();
  const CounterRng rng(split(cfg.seed, kGuessStream));
  std::uint64_t draw = 0;

  std::vector<Eigen::VectorXd> guesses;
  guesses.reserve(static_cast<std::size_t>(cfg.starts));

  if (kind == DistKind::kTle) {
    const double lambda0 = median_matched_rate(scale, 1.0);
    guesses.push_back(Eigen::Vector2d(lambda0, 1.0));
    while (static_cast<int>(guesses.size()) < cfg.starts) {
      const double lambda = lambda0 * std::exp(rng.uniform(draw++, -1.0, 1.0));
      const double alpha = std::exp(rng.uniform(draw++, -1.5, 1.5));
      guesses.push_back(Eigen::Vector2d(lambda, alpha));
    }
    return guesses;
  }

  const double anchors[] = {0.5, 1.5};
  for (double q : anchors) {
    if (static_cast<int>(guesses.size()) >= cfg.starts) break;
    const double lambda = feasible_rate(median_matched_rate(scale, q), q, x_max);
    guesses.push_back(Eigen::Vector3d(lambda, 1.0, q));
  }
  while (static_cast<int>(guesses.size()) < cfg.starts) {
    const double anchor_q = anchors[guesses.size() % 2];
    const double q = std::clamp(anchor_q + rng.uniform(draw++, -0.45, 0.45), ParamSpace::kQLower + 0.1,
                                ParamSpace::kQUpper - 0.01);
    double lambda = median_matched_rate(scale, q) * std::exp(rng.uniform(draw++, -0.5, 0.5));
    lambda = feasible_rate(lambda, q, x_max);
    const double alpha = std::exp(rng.uniform(draw++, -1.0, 1.0));
    guesses.push_back(Eigen::Vector3d(lambda, alpha, q));
  }
  return guesses;
}

}  // namespace tlfit
