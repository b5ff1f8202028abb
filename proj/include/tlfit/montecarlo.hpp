#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tlfit/estimators.hpp"
#include "tlfit/optimize.hpp"
#include "tlfit/params.hpp"

namespace tlfit {

struct StudyConfig {
  DistParams truth = TleParams(2.0, 1.0);
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 1;
  std::vector<Method> methods;
  std::uint64_t master_seed = 0;
  unsigned parallelism = 1;  // scheduling hint only; never changes results
  OptimizerConfig optimizer;

  void validate() const;
};

/// One (method, sample size, parameter) row.
struct StudyCell {
  Method method = Method::kLs;
  std::size_t n = 0;
  std::string parameter;  // "alpha", "lambda" or "q"
  double truth = 0.0;
  double mean_estimate = 0.0;  // NaN when every replication failed
  double bias = 0.0;
  double mse = 0.0;
  double failure_rate = 0.0;
  std::size_t replications = 0;  // attempted
  std::size_t successes = 0;     // included in mean, bias and MSE
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyCell> cells;  // method-major, then sample size, then parameter
};

/// Parameter names in report order.
std::vector<std::string> parameter_names(DistKind kind);

/// (alpha, lambda[, q]) of a parameter record, in parameter_names order.
std::vector<double> parameter_values(const DistParams& p);

/// Seed of replication `rep` in cell `cell` = method_index * |sizes| + size_index:
///   split(split(master, cell), rep).
/// It seeds both the sample and the optimizer's initial-guess jitter.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t cell, std::size_t rep);

/// Runs every replication of every cell. A fit that throws or does not
/// converge counts as a failure and is left out of the moments.
StudyReport run_study(const StudyConfig& cfg);

}  // namespace tlfit
