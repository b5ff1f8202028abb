#include "tlfit/cli.hpp"

#include <optional>

#include <CLI11.hpp>

#include "tlfit/distributions.hpp"
#include "tlfit/estimators.hpp"
#include "tlfit/montecarlo.hpp"
#include "tlfit/report.hpp"

namespace tlfit {

namespace {

struct ParamFlags {
  std::string dist;
  double alpha = 0.0;
  double lambda = 0.0;
  std::optional<double> q;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--dist", dist, "Distribution: tle or tlqe")->required();
    cmd.add_option("--alpha", alpha, "Shape alpha > 0")->required();
    cmd.add_option("--lambda", lambda, "Rate lambda > 0")->required();
    cmd.add_option("--q", q, "Deformation q < 2 (tlqe only)");
  }

  DistParams params() const {
    const DistKind kind = parse_dist_kind(dist);
    if (kind == DistKind::kTle) {
      if (q) throw InputError("--q only applies to --dist tlqe");
      return TleParams(alpha, lambda);
    }
    if (!q) throw InputError("--dist tlqe requires --q");
    return TlqeParams(alpha, lambda, *q);
  }
};

std::vector<std::string> invocation_echo(const std::vector<std::string>& args, bool drop_parallel) {
  std::vector<std::string> echo{kToolName};
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (drop_parallel) {
      if (args[i] == "--parallel") {
        ++i;
        continue;
      }
      if (args[i].rfind("--parallel=", 0) == 0) continue;
    }
    echo.push_back(args[i]);
  }
  return echo;
}

void check_out_format(const std::string& fmt) {
  if (fmt != "json" && fmt != "csv") throw InputError("--out must be json or csv");
}

int cmd_fit(const std::vector<std::string>& args, const std::string& dist, const std::string& method,
            const std::string& data, std::uint64_t seed, int starts, int max_iterations, const std::string& fmt,
            std::ostream& out) {
  check_out_format(fmt);
  FitRequest req{read_data_file(data), parse_dist_kind(dist), parse_method(method), {}};
  req.optimizer.seed = seed;
  req.optimizer.starts = starts;
  req.optimizer.max_iterations = max_iterations;
  req.optimizer.validate();
  const FitResult r = fit(req);
  if (fmt == "csv") {
    write_fit_csv(out, r);
  } else {
    out << make_document("fit", invocation_echo(args, false), "result", to_json(r)).dump(2) << '\n';
  }
  return r.converged ? 0 : 2;
}

int cmd_sample(const ParamFlags& pf, std::size_t n, std::uint64_t seed, std::ostream& out) {
  if (n == 0) throw InputError("--n must be positive");
  const SortedSample s = sample(n, pf.params(), seed);
  for (double v : s.values()) out << format_number(v) << '\n';
  return 0;
}

int cmd_eval(const ParamFlags& pf, const std::string& fn, std::optional<double> x, std::optional<double> u,
             std::ostream& out) {
  const DistParams p = pf.params();
  double value = 0.0;
  if (fn == "cdf" || fn == "pdf") {
    if (!x) throw InputError("--fn " + fn + " requires --x");
    if (u) throw InputError("--u only applies to --fn quantile");
    value = fn == "cdf" ? cdf(*x, p) : pdf(*x, p);
  } else if (fn == "quantile") {
    if (!u) throw InputError("--fn quantile requires --u");
    if (x) throw InputError("--x only applies to --fn cdf and pdf");
    value = quantile(*u, p);
  } else {
    throw InputError("--fn must be cdf, pdf or quantile");
  }
  out << format_number(value) << '\n';
  return 0;
}

int cmd_study(const std::vector<std::string>& args, const std::string& config_path, std::optional<unsigned> parallel,
              const std::string& fmt, std::ostream& out) {
  check_out_format(fmt);
  StudyConfig cfg = read_study_config(config_path);
  if (parallel) {
    if (*parallel == 0) throw InputError("--parallel must be positive");
    cfg.parallelism = *parallel;
  }
  const StudyReport report = run_study(cfg);
  if (fmt == "csv") {
    write_study_csv(out, report);
  } else {
    out << make_document("study", invocation_echo(args, true), "report", to_json(report)).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topp-Leone exponential and q-exponential fitting tool", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string fit_dist, fit_method, fit_data, fit_out = "json";
  std::uint64_t fit_seed = 0;
  int fit_starts = OptimizerConfig{}.starts;
  int fit_max_iterations = OptimizerConfig{}.max_iterations;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate parameters from a data file");
  fit_cmd->add_option("--dist", fit_dist, "Distribution: tle or tlqe")->required();
  fit_cmd->add_option("--method", fit_method, "Method: ls, wls, cvm, ad or ml")->required();
  fit_cmd->add_option("--data", fit_data, "Data file, one observation per line")->required();
  fit_cmd->add_option("--seed", fit_seed, "Seed for initial-guess jitter");
  fit_cmd->add_option("--starts", fit_starts, "Number of optimizer starts");
  fit_cmd->add_option("--max-iterations", fit_max_iterations, "Iteration budget per optimizer start");
  fit_cmd->add_option("--out", fit_out, "Output format: json or csv");

  ParamFlags sample_params;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a sorted random sample");
  sample_params.add_to(*sample_cmd);
  sample_cmd->add_option("--n", sample_n, "Sample size")->required();
  sample_cmd->add_option("--seed", sample_seed, "Random seed");

  ParamFlags eval_params;
  std::string eval_fn;
  std::optional<double> eval_x, eval_u;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate cdf, pdf or quantile");
  eval_params.add_to(*eval_cmd);
  eval_cmd->add_option("--fn", eval_fn, "cdf, pdf or quantile")->required();
  eval_cmd->add_option("--x", eval_x, "Point for cdf and pdf");
  eval_cmd->add_option("--u", eval_u, "Probability for quantile");

  std::string study_config, study_out = "json";
  std::optional<unsigned> study_parallel;
  auto* study_cmd = app.add_subcommand("study", "Run a Monte Carlo estimator study");
  study_cmd->add_option("--config", study_config, "Study configuration (JSON)")->required();
  study_cmd->add_option("--parallel", study_parallel, "Worker threads");
  study_cmd->add_option("--out", study_out, "Output format: json or csv");

  try {
    // CLI11 consumes a reversed argument list without the program name.
    std::vector<std::string> reversed;
    if (!args.empty()) reversed.assign(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*fit_cmd) return cmd_fit(args, fit_dist, fit_method, fit_data, fit_seed, fit_starts, fit_max_iterations, fit_out, out);
    if (*sample_cmd) return cmd_sample(sample_params, sample_n, sample_seed, out);
    if (*eval_cmd) return cmd_eval(eval_params, eval_fn, eval_x, eval_u, out);
    if (*study_cmd) return cmd_study(args, study_config, study_parallel, study_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tlfit
