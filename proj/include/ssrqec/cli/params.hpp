#pragma once

// Experiment parameter tables. The same tables drive the published JSON
// schema, strict config validation and default filling.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssrqec::cli {

using nlohmann::json;

enum class ParamType { integer, number, string, boolean, integer_or_list, number_or_list, integer_list, array, object };

struct ParamSpec {
  std::string name;
  ParamType type;
  std::string description;
  json default_value = nullptr;  // null and not optional: required
  std::optional<double> minimum, maximum;
  std::vector<std::string> choices;
  bool optional = false;  // may be absent with no default

  bool required() const { return default_value.is_null() && !optional; }
};

struct ExperimentSpec {
  std::string name;
  std::string description;
  bool seed_required = false;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentSpec>& experiments();
const ExperimentSpec* find_experiment(const std::string& name);

/// JSON Schema (2020-12) for run configs.
json config_schema();

enum class DiagnosticKind { schema, guard };

struct Diagnostic {
  DiagnosticKind kind;
  std::string path;
  std::string message;
};

std::string to_string(DiagnosticKind k);

/// Config in canonical form with defaults filled:
///   {"experiment", "seed" (if given), "output_dir", "params": {...}}
struct ResolvedConfig {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  json params;

  json to_json() const;
};

struct Validation {
  std::vector<Diagnostic> diagnostics;
  std::optional<ResolvedConfig> config;  // set only when there are no diagnostics

  bool ok() const { return diagnostics.empty(); }
  bool has_schema_error() const;
};

/// Schema, semantic and size-guard checks without running anything. Both
/// the nested form ({"params": {...}}) and the flat form (parameters next to
/// "experiment") are accepted. Never throws on bad input.
Validation validate_config(const json& config);

}  // namespace ssrqec::cli
