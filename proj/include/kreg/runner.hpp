#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "kreg/config.hpp"

namespace kreg {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit status of a run.
enum class Status : int { ok = 0, check_failure = 1, config_error = 2, numerical_failure = 3 };
std::string to_string(Status status);

struct RunReport {
  Status status = Status::ok;
  bool all_passed = true;
  /// tool, version, mode, seed, config echo, results, checks, all_passed,
  /// status, error (if any), timing.
  nlohmann::json document;
  /// Per-trial rows: probe,index,x,y,scale,lhs,rhs,violated.
  std::string csv;

  int exit_code() const { return static_cast<int>(status); }
  std::string json_text() const { return document.dump(2) + "\n"; }
};

/// Dispatches on config.mode. Solver and probe failures are reported in the
/// document (status numerical_failure or config_error), not thrown.
RunReport run(const ExperimentConfig& config);

/// Report for a configuration that failed validation.
RunReport config_error_report(const std::vector<ConfigError>& errors);

/// The report minus timing: everything the determinism contract covers.
nlohmann::json numerical_fields(const nlohmann::json& report);

}  // namespace kreg
