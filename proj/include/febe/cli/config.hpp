#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace febe::cli {

/// Bad configuration: unknown key, unparsable value or unit mismatch. The
/// message names the key and its source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed value that violates a physical invariant (negative magnitude,
/// zero lifetime, ...). Same message format as ConfigError.
class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

enum class Scenario { coupling, spectrum, eels, sweep_lp, sweep_gm, steady, rabi, entangle, phase_budget };

Scenario parse_scenario(std::string_view name);
std::string scenario_name(Scenario scenario);
std::vector<std::string> scenario_names();

enum class ValueKind { number, integer, boolean, choice, list };

struct KeySpec {
  std::string key;
  ValueKind kind;
  std::string unit;  ///< lab unit token accepted as a suffix, empty if dimensionless
  std::string default_value;
  double min = -1e300;
  double max = 1e300;
  std::vector<std::string> choices;
  std::string help;
};

/// Every accepted key, in output order.
const std::vector<KeySpec>& config_schema();

using Value = std::variant<double, long, bool, std::string, std::vector<double>>;

struct RunConfig {
  Scenario scenario = Scenario::coupling;
  std::map<std::string, Value> values;
  std::map<std::string, std::string> sources;  ///< where each non-default value came from

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& choice(const std::string& key) const;
  const std::vector<double>& list(const std::string& key) const;

  /// key = value lines in schema order, numbers with 12 significant digits.
  std::string resolved_text() const;
};

/// One `key = value` assignment from the command line.
struct Override {
  std::string assignment;
};

/// Parses `key = value` lines ('#' starts a comment), then applies overrides
/// in order. Later sources win. Throws ConfigError.
RunConfig parse_config(Scenario scenario, std::string_view text, const std::vector<Override>& overrides = {},
                       std::string_view source_name = "config");

}  // namespace febe::cli
