#pragma once

#include "symflag/witness.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace symflag {

/// Bad flags or inputs; the CLI maps it to exit code 2.
class config_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kReportSchema = "symflag.report/1";

struct RunConfig {
  std::string command;                // e.g. "verify key-lemma"
  int n = 2;
  std::optional<std::string> theta;   // comma list
  std::optional<Backend> backend;     // default depends on the command
  std::size_t samples = 10;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  double epsilon = 1e-6;
  std::optional<std::string> g;       // path to a matrix file, or "identity"
};

struct CheckRecord {
  std::string name;
  std::string anchor;  // the mathematical statement the record tests
  bool pass = false;
  nlohmann::json values;
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckRecord> checks;
  nlohmann::json summary = nlohmann::json::object();
  double wall_time_s = 0.0;

  bool pass() const;
  /// Stable JSON form; keys are sorted, wall time is the only nondeterministic field.
  nlohmann::json to_json() const;
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one command. Throws config_error for invalid configurations.
Report run_command(const RunConfig& cfg);

Report verify_key_lemma(const RunConfig& cfg);
Report verify_transversality(const RunConfig& cfg);
Report verify_inversion(const RunConfig& cfg);
Report verify_property_i(const RunConfig& cfg);
Report verify_rep(const RunConfig& cfg);
Report witness_sl2c(const RunConfig& cfg);
Report witness_su(const RunConfig& cfg);
Report check_non_maximal(const RunConfig& cfg);

std::string backend_name(Backend b);
Backend parse_backend(const std::string& s);

} // namespace symflag
