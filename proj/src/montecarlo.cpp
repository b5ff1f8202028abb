#include "tlfit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "tlfit/distributions.hpp"
#include "tlfit/rng.hpp"

namespace tlfit {

void StudyConfig::validate() const {
  if (sample_sizes.empty()) throw std::invalid_argument("sample_sizes must not be empty");
  for (std::size_t n : sample_sizes)
    if (n < kMinFitSize) throw std::invalid_argument("every sample size must be at least 3");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (methods.empty()) throw std::invalid_argument("methods must not be empty");
  optimizer.validate();
}

std::vector<std::string> parameter_names(DistKind kind) {
  if (kind == DistKind::kTle) return {"alpha", "lambda"};
  return {"alpha", "lambda", "q"};
}

std::vector<double> parameter_values(const DistParams& p) {
  if (const auto* t = std::get_if<TleParams>(&p)) return {t->alpha, t->lambda};
  const auto& q = std::get<TlqeParams>(p);
  return {q.alpha, q.lambda, q.q};
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t cell, std::size_t rep) {
  return split(master_seed, cell, rep);
}

StudyReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const DistKind kind = kind_of(cfg.truth);
  const std::size_t n_sizes = cfg.sample_sizes.size();
  const std::size_t n_cells = cfg.methods.size() * n_sizes;
  const std::size_t n_tasks = n_cells * cfg.replications;

  // Slot per (cell, replication); workers only write their own slot.
  std::vector<std::optional<std::vector<double>>> estimates(n_tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task; (task = next.fetch_add(1)) < n_tasks;) {
      const std::size_t cell = task / cfg.replications;
      const std::size_t rep = task % cfg.replications;
      const Method method = cfg.methods[cell / n_sizes];
      const std::size_t n = cfg.sample_sizes[cell % n_sizes];
      const std::uint64_t seed = replication_seed(cfg.master_seed, cell, rep);
      try {
        FitRequest req{sample(n, cfg.truth, seed), kind, method, cfg.optimizer};
        req.optimizer.seed = seed;
        const FitResult r = fit(req);
        if (r.converged) estimates[task] = parameter_values(r.params);
      } catch (const std::exception&) {
        // counted as a failure below
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.parallelism, static_cast<unsigned>(n_tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  StudyReport report{cfg, {}};
  const auto names = parameter_names(kind);
  const auto truth = parameter_values(cfg.truth);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      StudyCell c;
      c.method = cfg.methods[cell / n_sizes];
      c.n = cfg.sample_sizes[cell % n_sizes];
      c.parameter = names[k];
      c.truth = truth[k];
      c.replications = cfg.replications;
      double sum_err = 0.0;
      double sum_sq = 0.0;
      for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        const auto& e = estimates[cell * cfg.replications + rep];
        if (!e) continue;
        const double err = (*e)[k] - truth[k];
        sum_err += err;
        sum_sq += err * err;
        ++c.successes;
      }
      c.failure_rate =
          static_cast<double>(c.replications - c.successes) / static_cast<double>(c.replications);
      if (c.successes == 0) {
        c.mean_estimate = c.bias = c.mse = std::numeric_limits<double>::quiet_NaN();
      } else {
        const double m = static_cast<double>(c.successes);
        c.bias = sum_err / m;
        c.mean_estimate = truth[k] + c.bias;
        c.mse = sum_sq / m;
      }
      report.cells.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace tlfit
