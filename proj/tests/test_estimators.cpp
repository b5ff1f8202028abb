#include <catch_amalgamated.hpp>

#include <cmath>

#include "tlfit/distributions.hpp"
#include "tlfit/estimators.hpp"

using namespace tlfit;

namespace {

FitResult fit_sample(const SortedSample& s, DistKind kind, Method m, std::uint64_t seed = 0) {
  FitRequest req{s, kind, m, {}};
  req.optimizer.seed = seed;
  return fit(req);
}

// True when a q < 1 fit has its support edge pressed against x_(n), where
// the minimum is a boundary point and the gradient need not vanish.
bool on_support_edge(const FitResult& r, const SortedSample& s) {
  const auto* p = std::get_if<TlqeParams>(&r.params);
  return p != nullptr && p->q < 1.0 && p->lambda * (1.0 - p->q) * s.max() > 1.0 - 1e-6;
}

}  // namespace

TEST_CASE("AD on 5000 TLE(2, 1) draws", "[estimators][recovery]") {
  const auto s = sample(5000, TleParams(2.0, 1.0), 2024);
  const auto r = fit_sample(s, DistKind::kTle, Method::kAd);
  const auto& p = std::get<TleParams>(r.params);
  CHECK(r.converged);
  CHECK(p.alpha >= 1.7);
  CHECK(p.alpha <= 2.3);
  CHECK(p.lambda >= 0.85);
  CHECK(p.lambda <= 1.15);
  CHECK(r.n == 5000);
  CHECK(r.method == Method::kAd);
}

TEST_CASE("LS on 5000 draws generated at alpha = 1", "[estimators][recovery]") {
  const auto s = sample(5000, TleParams(1.0, 0.7), 31);
  const auto r = fit_sample(s, DistKind::kTle, Method::kLs);
  const double alpha = std::get<TleParams>(r.params).alpha;
  CHECK(alpha >= 0.9);
  CHECK(alpha <= 1.1);
}

TEST_CASE("every method recovers TLE parameters at n = 5000", "[estimators][recovery]") {
  for (double a : {0.5, 2.0}) {
    for (double l : {0.5, 1.0}) {
      const auto s = sample(5000, TleParams(a, l), 99);
      for (Method m : kAllMethods) {
        const auto r = fit_sample(s, DistKind::kTle, m);
        const auto& p = std::get<TleParams>(r.params);
        INFO("truth (" << a << ", " << l << ") method " << to_string(m) << " fit (" << p.alpha << ", " << p.lambda
                       << ")");
        CHECK(r.converged);
        CHECK(std::abs(p.alpha / a - 1) <= 0.15);
        CHECK(std::abs(p.lambda / l - 1) <= 0.15);
      }
    }
  }
}

TEST_CASE("TLqE fits at n = 5000 beat the truth and ML stays in band", "[estimators][recovery]") {
  // Minimum-distance TLqE estimates of (lambda, q) slide along a ridge and
  // can leave a 15% band on a single sample; the checks here are that each
  // fit is a genuine minimum and that ML lands in the band.
  for (double a : {0.5, 2.0}) {
    for (double q : {0.5, 1.5}) {
      const TlqeParams truth(a, 1.0, q);
      const auto s = sample(5000, truth, 99);
      for (Method m : kAllMethods) {
        const auto r = fit_sample(s, DistKind::kTlqe, m);
        const auto& p = std::get<TlqeParams>(r.params);
        INFO("truth (" << a << ", 1, " << q << ") method " << to_string(m) << " fit (" << p.alpha << ", " << p.lambda
                       << ", " << p.q << ")");
        CHECK(r.converged);
        CHECK(r.objective_value <= method_objective(m, s, truth, GradientMode::kValueOnly).value);
        CHECK(std::abs(p.alpha / a - 1) <= 0.15);
        if (m == Method::kMl) {
          CHECK(std::abs(p.lambda - 1) <= 0.15);
          CHECK(std::abs(p.q - q) <= 0.15);
        }
      }
    }
  }
}

TEST_CASE("MLE on 5000 TLE(2, 1) draws", "[estimators][mle]") {
  const auto s = sample(5000, TleParams(2.0, 1.0), 2024);
  FitRequest req{s, DistKind::kTle, Method::kLs, {}};
  const auto r = fit_mle(req);
  CHECK(r.method == Method::kMl);
  const auto& p = std::get<TleParams>(r.params);
  CHECK(p.alpha >= 1.7);
  CHECK(p.alpha <= 2.3);
  CHECK(p.lambda >= 0.85);
  CHECK(p.lambda <= 1.15);
  // The fitted log-likelihood is at least the truth's.
  const double nll_truth = negative_log_likelihood(s, TleParams(2.0, 1.0)).value;
  CHECK(r.objective_value <= nll_truth + 1e-8);
}

TEST_CASE("MLE with alpha at 1 gives the exponential rate anchor", "[estimators][mle]") {
  // Under alpha = 1 the law is exponential with rate 2 lambda, so the profile
  // maximum in lambda sits at 1 / (2 mean).
  const auto s = sample(400, TleParams(1.0, 0.8), 5);
  const double anchor = 1.0 / (2.0 * s.values().mean());
  const auto nll = [&](double l) { return negative_log_likelihood(s, TleParams(1.0, l)).value; };
  CHECK(nll(anchor) <= nll(anchor * 1.001));
  CHECK(nll(anchor) <= nll(anchor * 0.999));
  CHECK(std::abs(negative_log_likelihood(s, TleParams(1.0, anchor)).gradient(0)) < 1e-8 * s.size());
}

TEST_CASE("converged interior fits are stationary", "[estimators][stationarity]") {
  int interior = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (const DistParams truth : {DistParams(TleParams(2.0, 1.0)), DistParams(TlqeParams(2.0, 1.0, 1.5)),
                                   DistParams(TlqeParams(2.0, 1.0, 0.5))}) {
      const auto s = sample(200, truth, 40 + seed);
      const DistKind kind = kind_of(truth);
      for (Method m : kAllMethods) {
        const auto r = fit_sample(s, kind, m, seed);
        if (!r.converged || on_support_edge(r, s)) continue;
        ++interior;
        INFO("method " << to_string(m) << " seed " << seed << " value " << r.objective_value);
        CHECK(r.stationarity_norm <= 1e-4 * (1 + std::abs(r.objective_value)));
      }
    }
  }
  CHECK(interior >= 40);
}

TEST_CASE("fits are reproducible", "[estimators]") {
  const auto s = sample(300, TlqeParams(1.5, 0.8, 1.3), 12);
  const auto a = fit_sample(s, DistKind::kTlqe, Method::kCvm, 3);
  const auto b = fit_sample(s, DistKind::kTlqe, Method::kCvm, 3);
  CHECK(std::get<TlqeParams>(a.params).to_vector() == std::get<TlqeParams>(b.params).to_vector());
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.stationarity_norm == b.stationarity_norm);
  CHECK(a.per_start_values == b.per_start_values);
}

TEST_CASE("fewer than three observations are rejected", "[estimators]") {
  const SortedSample s(std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(fit_sample(s, DistKind::kTle, Method::kLs), std::invalid_argument);
  CHECK_THROWS_AS(fit_mle({s, DistKind::kTlqe, Method::kMl, {}}), std::invalid_argument);
  CHECK_NOTHROW(fit_sample(SortedSample(std::vector<double>{0.5, 1.0, 1.2}), DistKind::kTle, Method::kLs));
}

TEST_CASE("q estimates next to 1 are snapped onto the TLE path", "[estimators]") {
  // Data from the exponential limit; whenever q lands within the snap
  // tolerance the report carries q = 1 and the TLE fit for alpha, lambda.
  const auto s = sample(2000, TleParams(2.0, 1.0), 77);
  for (Method m : kAllMethods) {
    const auto r = fit_sample(s, DistKind::kTlqe, m);
    const auto& p = std::get<TlqeParams>(r.params);
    CHECK((p.q == 1.0 || std::abs(p.q - 1.0) >= kQSnapTolerance));
    if (p.q == 1.0) {
      const auto e = std::get<TleParams>(fit_sample(s, DistKind::kTle, m).params);
      CHECK(p.alpha == e.alpha);
      CHECK(p.lambda == e.lambda);
    }
  }
}

TEST_CASE("method names round trip", "[estimators]") {
  for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("mom"), std::invalid_argument);
}
