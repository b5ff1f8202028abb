#include "tlfit/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tlfit/distributions.hpp"

namespace tlfit {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) config_error("/" + key, "missing required field");
  return doc.at(key);
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_at(const json& v, const std::string& path, std::uint64_t min_value) {
  // nlohmann stores nonnegative integer literals as unsigned
  if (!v.is_number_unsigned()) config_error(path, "must be a nonnegative integer");
  const auto x = v.get<std::uint64_t>();
  if (x < min_value) config_error(path, "must be an integer >= " + std::to_string(min_value));
  return x;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const DistParams& p) {
  json out = json::object();
  const auto names = parameter_names(kind_of(p));
  const auto values = parameter_values(p);
  for (std::size_t k = 0; k < names.size(); ++k) out[names[k]] = values[k];
  return out;
}

}  // namespace

SortedSample parse_data(std::istream& in) {
  std::vector<double> values;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
      throw InputError("line " + std::to_string(lineno) + ": cannot parse '" + std::string(t) + "' as a number");
    if (!std::isfinite(v) || v < 0.0)
      throw InputError("line " + std::to_string(lineno) + ": observations must be finite and nonnegative");
    values.push_back(v);
  }
  if (values.empty()) throw InputError("data contains no observations");
  return SortedSample(values);
}

SortedSample read_data_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file '" + path.string() + "'");
  return parse_data(in);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StudyConfig parse_study_config(const json& doc) {
  if (!doc.is_object()) config_error("", "study config must be a JSON object");
  StudyConfig cfg;

  const json& dist = require(doc, "distribution");
  if (!dist.is_string()) config_error("/distribution", "must be \"tle\" or \"tlqe\"");
  DistKind kind;
  try {
    kind = parse_dist_kind(dist.get<std::string>());
  } catch (const std::invalid_argument& e) {
    config_error("/distribution", e.what());
  }

  const json& truth = require(doc, "truth");
  if (!truth.is_object()) config_error("/truth", "must be an object");
  if (!truth.contains("alpha")) config_error("/truth/alpha", "missing required field");
  if (!truth.contains("lambda")) config_error("/truth/lambda", "missing required field");
  const double alpha = number_at(truth.at("alpha"), "/truth/alpha");
  const double lambda = number_at(truth.at("lambda"), "/truth/lambda");
  try {
    if (kind == DistKind::kTle) {
      if (truth.contains("q")) config_error("/truth/q", "only valid for tlqe");
      cfg.truth = TleParams(alpha, lambda);
    } else {
      if (!truth.contains("q")) config_error("/truth/q", "missing required field");
      cfg.truth = TlqeParams(alpha, lambda, number_at(truth.at("q"), "/truth/q"));
    }
  } catch (const std::invalid_argument& e) {
    config_error("/truth", e.what());
  }

  const json& sizes = require(doc, "sample_sizes");
  if (!sizes.is_array() || sizes.empty()) config_error("/sample_sizes", "must be a non-empty array");
  for (std::size_t i = 0; i < sizes.size(); ++i)
    cfg.sample_sizes.push_back(
        static_cast<std::size_t>(unsigned_at(sizes[i], "/sample_sizes/" + std::to_string(i), kMinFitSize)));

  cfg.replications = static_cast<std::size_t>(unsigned_at(require(doc, "replications"), "/replications", 1));

  const json& methods = require(doc, "methods");
  if (!methods.is_array() || methods.empty()) config_error("/methods", "must be a non-empty array");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string path = "/methods/" + std::to_string(i);
    if (!methods[i].is_string()) config_error(path, "must be a method name");
    try {
      cfg.methods.push_back(parse_method(methods[i].get<std::string>()));
    } catch (const std::invalid_argument& e) {
      config_error(path, e.what());
    }
  }

  cfg.master_seed = unsigned_at(require(doc, "master_seed"), "/master_seed", 0);
  if (doc.contains("parallelism"))
    cfg.parallelism = static_cast<unsigned>(unsigned_at(doc.at("parallelism"), "/parallelism", 1));

  if (doc.contains("optimizer")) {
    const json& opt = doc.at("optimizer");
    if (!opt.is_object()) config_error("/optimizer", "must be an object");
    if (opt.contains("max_iterations"))
      cfg.optimizer.max_iterations =
          static_cast<int>(unsigned_at(opt.at("max_iterations"), "/optimizer/max_iterations", 1));
    if (opt.contains("starts"))
      cfg.optimizer.starts = static_cast<int>(unsigned_at(opt.at("starts"), "/optimizer/starts", 1));
    if (opt.contains("value_tolerance")) {
      cfg.optimizer.value_tolerance = number_at(opt.at("value_tolerance"), "/optimizer/value_tolerance");
      if (!(cfg.optimizer.value_tolerance > 0)) config_error("/optimizer/value_tolerance", "must be positive");
    }
    if (opt.contains("point_tolerance")) {
      cfg.optimizer.point_tolerance = number_at(opt.at("point_tolerance"), "/optimizer/point_tolerance");
      if (!(cfg.optimizer.point_tolerance > 0)) config_error("/optimizer/point_tolerance", "must be positive");
    }
  }
  return cfg;
}

StudyConfig read_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_study_config(doc);
}

json to_json(const StudyConfig& cfg) {
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  return json{
      {"distribution", std::string(to_string(kind_of(cfg.truth)))},
      {"truth", params_json(cfg.truth)},
      {"sample_sizes", cfg.sample_sizes},
      {"replications", cfg.replications},
      {"methods", methods},
      {"master_seed", cfg.master_seed},
      {"optimizer",
       {{"max_iterations", cfg.optimizer.max_iterations},
        {"starts", cfg.optimizer.starts},
        {"value_tolerance", cfg.optimizer.value_tolerance},
        {"point_tolerance", cfg.optimizer.point_tolerance}}},
  };
}

json to_json(const FitResult& r) {
  const Support s = support(r.params);
  json per_start = json::array();
  for (double v : r.per_start_values) per_start.push_back(number_or_null(v));
  return json{
      {"distribution", std::string(to_string(kind_of(r.params)))},
      {"method", std::string(to_string(r.method))},
      {"n", r.n},
      {"params", params_json(r.params)},
      {"objective_value", number_or_null(r.objective_value)},
      {"converged", r.converged},
      {"stationarity_norm", number_or_null(r.stationarity_norm)},
      {"iterations", r.iterations},
      {"starts_tried", r.starts_tried},
      {"per_start_values", per_start},
      // null upper means unbounded
      {"support", {{"lower", s.lower}, {"upper", number_or_null(s.upper)}}},
  };
}

json to_json(const StudyReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back(json{
        {"method", std::string(to_string(c.method))},
        {"n", c.n},
        {"parameter", c.parameter},
        {"truth", c.truth},
        {"mean_estimate", number_or_null(c.mean_estimate)},
        {"bias", number_or_null(c.bias)},
        {"mse", number_or_null(c.mse)},
        {"failure_rate", c.failure_rate},
        {"replications", c.replications},
        {"successes", c.successes},
    });
  }
  return json{{"config", to_json(r.config)}, {"cells", cells}};
}

json make_document(const std::string& command, const std::vector<std::string>& invocation,
                   const std::string& payload_key, json payload) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"command", command},
              {"invocation", invocation},
              {payload_key, std::move(payload)}};
}

void write_fit_csv(std::ostream& out, const FitResult& r) {
  const auto names = parameter_names(kind_of(r.params));
  const auto values = parameter_values(r.params);
  const Support s = support(r.params);
  out << "distribution,method,n";
  for (const auto& name : names) out << ',' << name;
  out << ",objective_value,converged,stationarity_norm,iterations,starts_tried,support_upper\n";
  out << to_string(kind_of(r.params)) << ',' << to_string(r.method) << ',' << r.n;
  for (double v : values) out << ',' << format_number(v);
  out << ',' << format_number(r.objective_value) << ',' << (r.converged ? "true" : "false") << ','
      << format_number(r.stationarity_norm) << ',' << r.iterations << ',' << r.starts_tried << ','
      << format_number(s.upper) << '\n';
}

void write_study_csv(std::ostream& out, const StudyReport& r) {
  out << "method,n,parameter,truth,mean_estimate,bias,mse,failure_rate,replications,successes\n";
  for (const auto& c : r.cells) {
    out << to_string(c.method) << ',' << c.n << ',' << c.parameter << ',' << format_number(c.truth) << ','
        << format_number(c.mean_estimate) << ',' << format_number(c.bias) << ',' << format_number(c.mse) << ','
        << format_number(c.failure_rate) << ',' << c.replications << ',' << c.successes << '\n';
  }
}

}  // namespace tlfit
