// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Detail lines for a criterion are indented under it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradient_check.hpp"
#include "oracles.hpp"
#include "tlfit/cli.hpp"
#include "tlfit/distributions.hpp"
#include "tlfit/montecarlo.hpp"
#include "tlfit/objectives.hpp"
#include "tlfit/optimize.hpp"
#include "tlfit/rng.hpp"

using namespace tlfit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    pass = false;
    if (details.size() < 25) details.push_back(why);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<TlqeParams> parameter_grid() {
  std::vector<TlqeParams> grid;
  for (double a : {0.5, 1.0, 2.0, 5.0})
    for (double l : {0.25, 1.0, 4.0})
      for (double q : {-0.5, 0.5, 1.0, 1.5, 1.9}) grid.emplace_back(a, l, q);
  return grid;
}

// q = 1 grid points are evaluated as the TLE law they reduce to.
DistParams as_dist(const TlqeParams& p) {
  return p.q == 1.0 ? DistParams(TleParams(p.alpha, p.lambda)) : DistParams(p);
}

std::string describe(const TlqeParams& p) { return fmt("(alpha=%g, lambda=%g, q=%g)", p.alpha, p.lambda, p.q); }

Outcome normalization() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& p : parameter_grid()) {
    const DistParams d = as_dist(p);
    const Support s = support(d);
    const auto f = [&](double x) { return pdf(x, d); };
    const double total = s.bounded() ? oracle::integrate_interval(f, 0.0, s.upper) : oracle::integrate_half_line(f);
    worst = std::max(worst, std::abs(total - 1.0));
    if (!(std::abs(total - 1.0) <= 1e-6)) o.fail(describe(p) + fmt(" integrates to %.12g", total));
  }
  const double secs = seconds_since(t0);
  if (secs >= 10.0) o.fail(fmt("runtime %.2f s exceeds 10 s", secs));
  o.summary = fmt("60 parameter sets, max |integral - 1| = %.2e, %.2f s", worst, secs);
  return o;
}

Outcome coherence() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst_fd = 0.0, worst_rt = 0.0;
  int points = 0;
  std::uint64_t stream = 0;
  for (const auto& p : parameter_grid()) {
    const DistParams d = as_dist(p);
    const CounterRng rng(split(0x636f6865ULL, stream++));
    for (std::uint64_t i = 0; i < 100; ++i) {
      const double x = quantile(rng.uniform(i, 0.01, 0.99), d);
      const Support s = support(d);
      const double room = s.bounded() ? std::min(x, s.upper - x) : x;
      const double h = 1e-5 * room;
      const double fd = oracle::central_difference([&](double t) { return cdf(t, d); }, x, h);
      const double rel_fd = std::abs(pdf(x, d) - fd) / std::abs(fd);
      const double rel_rt = std::abs(quantile(cdf(x, d), d) - x) / x;
      worst_fd = std::max(worst_fd, rel_fd);
      worst_rt = std::max(worst_rt, rel_rt);
      if (!(rel_fd <= 1e-6)) o.fail(describe(p) + fmt(" x=%.6g: pdf vs fd rel %.2e", x, rel_fd));
      if (!(rel_rt <= 1e-8)) o.fail(describe(p) + fmt(" x=%.6g: round trip rel %.2e", x, rel_rt));
      ++points;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 5.0) o.fail(fmt("runtime %.2f s exceeds 5 s", secs));
  o.summary = fmt("%g interior points, max rel fd %.2e, max rel round trip %.2e, %.2f s", points, worst_fd, worst_rt,
                  secs);
  return o;
}

Outcome reduction_and_continuity() {
  Outcome o;
  double worst = 0.0;
  for (double lambda : {0.25, 1.0, 4.0}) {
    const TleParams p(1.0, lambda);
    for (int i = 0; i < 100; ++i) {
      const double x = 0.05 * i / lambda;
      const double expo = -std::expm1(-(2.0 * lambda) * x);
      if (cdf(x, p) != expo) o.fail(fmt("TLE(1, %g) at x=%g differs from the exponential cdf", lambda, x));
    }
  }
  for (double alpha : {0.5, 2.0, 5.0}) {
    for (double lambda : {0.25, 1.0, 4.0}) {
      const TleParams e(alpha, lambda);
      for (int i = 0; i < 100; ++i) {
        const double x = 0.05 * i / lambda;
        if (cdf(x, TlqeParams(alpha, lambda, 1.0)) != cdf(x, e)) o.fail(fmt("q=1 path differs at x=%g", x));
        for (double q : {1.0 - 1e-6, 1.0 + 1e-6}) {
          const double gap = std::abs(cdf(x, TlqeParams(alpha, lambda, q)) - cdf(x, e));
          worst = std::max(worst, gap);
          if (!(gap <= 1e-4)) o.fail(fmt("q=%.7f alpha=%g lambda=%g x=%g gap %.2e", q, alpha, lambda, x) +
                                     fmt(" (gap %.2e)", gap));
        }
      }
    }
  }
  o.summary = fmt("alpha=1 exact on 3x100 points; max |cdf(q=1+-1e-6) - cdf_tle| = %.2e", worst);
  return o;
}

Outcome gradients() {
  Outcome o;
  const auto t0 = Clock::now();
  int checked = 0;
  for (auto dist : {DistKind::kTle, DistKind::kTlqe}) {
    for (int kind = 0; kind < 4; ++kind) {
      for (std::uint64_t i = 0; i < 100; ++i) {
        const auto r = gradcheck::check(kind, gradcheck::make_config(dist, i));
        ++checked;
        if (!r.ok)
          o.fail(std::string(to_string(dist)) + " " + std::string(to_string(static_cast<ObjectiveKind>(kind))) +
                 " config " + std::to_string(i) + ": " + r.detail);
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 30.0) o.fail(fmt("runtime %.2f s exceeds 30 s", secs));
  o.summary = fmt("%g configurations (4 objectives x 2 distributions x 100), %.2f s", checked, secs);
  return o;
}

Outcome optimizer_oracle() {
  Outcome o;
  std::ifstream in(TLFIT_FIXTURE_DIR "/grid_oracle.json");
  if (!in) {
    o.fail("missing grid_oracle.json");
    return o;
  }
  const auto doc = nlohmann::json::parse(in);
  const auto t0 = Clock::now();
  std::string margins;
  for (const auto& fx : doc.at("fixtures")) {
    const std::string name = fx.at("objective");
    const SortedSample s(fx.at("sample").get<std::vector<double>>());
    const ObjectiveKind kind = name == "ls"    ? ObjectiveKind::kLs
                               : name == "wls" ? ObjectiveKind::kWls
                               : name == "cvm" ? ObjectiveKind::kCvm
                                               : ObjectiveKind::kAd;
    const Objective obj = [&](const Eigen::VectorXd& t) {
      return evaluate(kind, s, TleParams::from_vector(t), GradientMode::kValueOnly);
    };
    const OptimizerConfig cfg;
    const auto out = minimize(obj, ParamSpace(DistKind::kTle), cfg, default_initial_guesses(s, DistKind::kTle, cfg));
    const double grid_min = fx.at("grid_min");
    margins += " " + name + fmt(" %.3g", out.best_value - grid_min);
    if (!(out.best_value <= grid_min + 1e-6)) o.fail(name + fmt(": %.12g > grid %.12g", out.best_value, grid_min));
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) o.fail(fmt("check took %.2f s, limit 1 s", secs));
  o.summary = "4 n=20 fixtures, best - grid min:" + margins + fmt(", %.3f s", secs);
  return o;
}

Outcome parameter_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  const DistParams truths[] = {TleParams(2.0, 1.0), TlqeParams(2.0, 1.0, 0.5), TlqeParams(2.0, 1.0, 1.5)};
  const char* labels[] = {"TLE(2,1)", "TLqE(2,1,0.5)", "TLqE(2,1,1.5)"};
  int cells = 0;
  double worst_rel = 0.0;
  for (std::size_t t = 0; t < 3; ++t) {
    StudyConfig cfg;
    cfg.truth = truths[t];
    cfg.sample_sizes = {100, 500};
    cfg.replications = 200;
    cfg.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
    cfg.master_seed = 20240601;
    cfg.parallelism = std::max(1u, std::thread::hardware_concurrency());
    const auto report = run_study(cfg);
    const std::size_t n_params = parameter_names(kind_of(cfg.truth)).size();
    // Cells are method-major, then sample size (100, 500), then parameter.
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      for (std::size_t k = 0; k < n_params; ++k) {
        const auto& small = report.cells[(m * 2 + 0) * n_params + k];
        const auto& large = report.cells[(m * 2 + 1) * n_params + k];
        const std::string where = std::string(labels[t]) + " " + std::string(to_string(large.method)) + " " +
                                  large.parameter;
        const double rel = std::abs(large.mean_estimate - large.truth) / std::abs(large.truth);
        worst_rel = std::max(worst_rel, std::isfinite(rel) ? rel : 1e300);
        ++cells;
        if (!(rel <= 0.10))
          o.fail(where + fmt(": mean %.4f vs truth %g (%.1f%% off) at n=500", large.mean_estimate, large.truth,
                             100 * rel));
        if (!(large.mse < small.mse)) o.fail(where + fmt(": MSE n=500 %.4g not below n=100 %.4g", large.mse, small.mse));
        if (large.failure_rate > 0 || small.failure_rate > 0)
          o.details.push_back(where + fmt(" failure rates %.3f (n=100), %.3f (n=500)", small.failure_rate,
                                          large.failure_rate));
      }
    }
  }
  const double secs = seconds_since(t0);
  o.summary = fmt("%g (truth, method, parameter) cells, 200 reps, worst mean error %.1f%%, %.0f s", cells,
                  100 * worst_rel, secs);
  return o;
}

std::string cli_stdout(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return out.str();
}

Outcome determinism() {
  Outcome o;
  int c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  const std::string cfg = TLFIT_FIXTURE_DIR "/study_small.json";
  const auto p1 = cli_stdout({"tlfit", "study", "--config", cfg, "--parallel", "1"}, c1);
  const auto p8 = cli_stdout({"tlfit", "study", "--config", cfg, "--parallel", "8"}, c2);
  if (c1 != 0 || c2 != 0) o.fail("study exited nonzero");
  if (p1 != p8) o.fail("study output differs between --parallel 1 and --parallel 8");
  const std::vector<std::string> sample_args{"tlfit", "sample", "--dist", "tlqe", "--alpha", "2", "--lambda",
                                             "1",     "--q",    "1.5",  "--n",  "2000", "--seed", "11"};
  const auto s1 = cli_stdout(sample_args, c3);
  const auto s2 = cli_stdout(sample_args, c4);
  if (c3 != 0 || c4 != 0) o.fail("sample exited nonzero");
  if (s1 != s2) o.fail("sample output differs between identical runs");
  o.summary = fmt("study JSON %g bytes identical across --parallel 1/8; sample %g bytes identical across runs",
                  static_cast<double>(p1.size()), static_cast<double>(s1.size()));
  return o;
}

Outcome hand_fixtures() {
  Outcome o;
  const SortedSample s(std::vector<double>{std::log(2.0), std::log(4.0)});
  const TleParams p(1.0, 0.5);
  struct Case {
    const char* name;
    double got;
    double expected;
  };
  // AD: -2 - (1/2)[1 (ln .5 + ln .25) + 3 (ln .75 + ln .5)] = 0.5109646503575069
  const Case cases[] = {{"LS", ls_value(s, p).value, 1.0 / 36 + 1.0 / 144},
                        {"CvM", cvm_value(s, p).value, 1.0 / 24 + 1.0 / 16},
                        {"AD", ad_value(s, p).value, 0.5109646503575069}};
  for (const auto& c : cases) {
    if (!(std::abs(c.got - c.expected) <= 1e-10))
      o.fail(std::string(c.name) + fmt(": %.15g vs %.15g", c.got, c.expected));
  }
  o.summary = fmt("LS=%.15g CvM=%.15g AD=%.15g", cases[0].got, cases[1].got, cases[2].got);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "normalization", normalization},
      {2, "cdf/pdf/quantile coherence", coherence},
      {3, "reduction and continuity", reduction_and_continuity},
      {4, "gradient correctness", gradients},
      {5, "optimizer grid oracle", optimizer_oracle},
      {6, "parameter recovery", parameter_recovery},
      {7, "determinism", determinism},
      {8, "hand-arithmetic fixtures", hand_fixtures},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << ": " << o.summary << '\n';
    for (const auto& d : o.details) std::cout << "      " << d << '\n';
    std::cout.flush();
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
