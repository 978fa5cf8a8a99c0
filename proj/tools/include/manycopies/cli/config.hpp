#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace manycopies::cli {

enum class Experiment { povm_frontier, collapse_evolve, collapse_jump, bath_compare, seq_bound, born_spectrum, sorkin };

std::string to_string(Experiment e);
std::optional<Experiment> experiment_from_string(const std::string& name);
const std::vector<Experiment>& all_experiments();

// Bad input. `field` is a JSON-pointer-like path such as "parameters.epsilon".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ParamType { number, integer, boolean, choice, number_list, text };

struct ParamSpec {
  std::string name;
  ParamType type;
  nlohmann::json default_value;
  double min = 0.0;  // numeric bounds (inclusive unless *_open)
  double max = 0.0;
  bool min_open = false;
  bool max_open = false;
  std::vector<std::string> choices;
  std::string help;
  bool optional = false;  // no default; absent means unset

  // "epsilon ∈ [0,1]" style description of the admissible range.
  std::string range_text() const;
};

const std::vector<ParamSpec>& parameter_specs(Experiment e);

struct RunConfig {
  Experiment experiment = Experiment::seq_bound;
  nlohmann::json parameters = nlohmann::json::object();  // fully populated, validated
  std::uint64_t seed = 0;
  std::string output_dir = "runs";

  bool operator==(const RunConfig&) const = default;

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  bool has(const std::string& key) const;
};

// Validates a JSON document {"experiment", "parameters", "seed", "output_dir"}.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& json_text);

// Command line: <experiment> [--config file] [--set k=v]... [--seed N] [--out dir].
// Flag values override the config file.
RunConfig parse_args(const std::vector<std::string>& args);

nlohmann::json serialize(const RunConfig& config);

// Hex SHA-256 of the canonical config (output_dir excluded).
std::string config_digest(const RunConfig& config);

// Help text listing every experiment's parameters with defaults and ranges.
std::string parameter_help();

}  // namespace manycopies::cli
