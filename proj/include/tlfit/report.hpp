#pragma once

// Data files, study configuration files and report documents.

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlfit/estimators.hpp"
#include "tlfit/montecarlo.hpp"
#include "tlfit/sorted_sample.hpp"

namespace tlfit {

inline constexpr const char* kToolName = "tlfit";
inline constexpr const char* kToolVersion = "0.1.0";

/// Bad user input: unreadable or malformed data, bad flags or config.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One nonnegative decimal per line; blank lines and lines whose first
/// non-blank character is '#' are skipped. Errors name the 1-based line.
SortedSample parse_data(std::istream& in);
SortedSample read_data_file(const std::filesystem::path& path);

/// printf "%.17g".
std::string format_number(double v);

/// Parses a study configuration; errors carry the JSON pointer of the
/// offending field, e.g. "/sample_sizes/1: must be an integer >= 3".
StudyConfig parse_study_config(const nlohmann::json& doc);
StudyConfig read_study_config(const std::filesystem::path& path);

/// Config echo; `parallelism` is left out because it never affects results.
nlohmann::json to_json(const StudyConfig& cfg);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const StudyReport& r);

/// Wraps a payload with tool name, version and invocation.
nlohmann::json make_document(const std::string& command, const std::vector<std::string>& invocation,
                             const std::string& payload_key, nlohmann::json payload);

void write_fit_csv(std::ostream& out, const FitResult& r);
void write_study_csv(std::ostream& out, const StudyReport& r);

}  // namespace tlfit
