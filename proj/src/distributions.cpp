#include "tlfit/distributions.hpp"

#include <string>
#include <vector>

#include "tlfit/objectives.hpp"
#include "tlfit/rng.hpp"

namespace tlfit {

std::string_view to_string(DistKind kind) { return kind == DistKind::kTle ? "tle" : "tlqe"; }

DistKind parse_dist_kind(std::string_view name) {
  if (name == "tle") return DistKind::kTle;
  if (name == "tlqe") return DistKind::kTlqe;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "' (expected tle or tlqe)");
}

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kLs: return "ls";
    case ObjectiveKind::kWls: return "wls";
    case ObjectiveKind::kCvm: return "cvm";
    case ObjectiveKind::kAd: return "ad";
  }
  return "?";
}

SortedSample sample(std::size_t n, const DistParams& p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const CounterRng rng(seed);
  std::vector<double> draws(n);
  for (std::size_t i = 0; i < n; ++i) draws[i] = quantile(rng.uniform(i), p);
  return SortedSample(draws);
}

}  // namespace tlfit
