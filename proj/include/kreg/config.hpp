#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "kreg/extended_real.hpp"
#include "kreg/functional.hpp"
#include "kreg/kernel.hpp"
#include "kreg/loss.hpp"
#include "kreg/regularizer.hpp"

namespace kreg {

enum class Mode { solve, verify, gram, probe };
std::string to_string(Mode mode);

struct ProbeSpec {
  /// Probe mode: orthogonal, ray, equal_norm, equivalence, rotation_path,
  /// contraction, chain, sublevel, necessity, span.
  std::string name;
  int dim = 2;
  std::size_t trials = 1000;
  std::size_t samples = 200;
  ExtendedReal level = 1.0;
  int steps = 64;
  std::optional<Eigen::VectorXd> x;
  std::optional<Eigen::VectorXd> y;
  std::vector<double> gamma_schedule;
  /// Span experiment functionals as vectors of R^dim.
  std::vector<Eigen::VectorXd> vectors;

  friend bool operator==(const ProbeSpec&, const ProbeSpec&) = default;
};

struct Tolerances {
  double check = kCheckTolerance;
  double radius = 1e-3;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct ExperimentConfig {
  Mode mode = Mode::solve;
  std::uint64_t seed = 0;
  std::optional<Kernel> kernel;
  std::vector<LinearFunctional> functionals;
  Regularizer regularizer = Regularizer::radial(RadialProfile::square());
  std::optional<LossDescriptor> loss;
  ExtendedReal gamma = 1.0;
  ProbeSpec probe;
  std::string output_json;
  std::string output_csv;
  Tolerances tolerances;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigError {
  /// Dotted key path, e.g. "kernel.width" or "functionals[1].point".
  std::string path;
  std::string message;
};

struct ConfigParse {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value(); }
};

/// Strict schema validation: unknown keys are errors, and every error is
/// collected, not only the first.
ConfigParse validate_config(const std::string& text);
ConfigParse validate_config(const nlohmann::json& document);
inline ConfigParse validate_config(const char* text) { return validate_config(std::string(text)); }

/// Canonical JSON form; validate_config(to_json(c)) yields c again.
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json to_json(ExtendedReal value);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);

}  // namespace kreg
