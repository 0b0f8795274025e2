#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sociohub/connector.hpp"
#include "sociohub/rate_limit.hpp"
#include "sociohub/store.hpp"

namespace sociohub {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// `key = value` lines; `#` starts a comment line; blank lines ignored.
/// Throws ConfigError with the line number on a malformed line.
ConfigMap parse_config_text(std::string_view text);

/// Throws ConfigError when the file cannot be read.
ConfigMap load_config_file(const std::string& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

/// Environment variable name for a key: `SOCIOHUB_` + key upper-cased with
/// `.` replaced by `_` (twitter.api_key -> SOCIOHUB_TWITTER_API_KEY).
std::string env_name_for(std::string_view key);

/// Overlays every known key found in the environment.
void apply_env_overrides(ConfigMap& config, const EnvLookup& env = process_env);

/// Every key the application reads.
const std::vector<std::string>& known_config_keys();

struct AppConfig {
  std::map<Platform, ConnectorConfig> connectors;  // configured platforms only
  RateLimitTable rate_limits = default_rate_limits();
  StoreSettings store;
  std::optional<std::string> ui_dir;
};

/// A platform counts as configured when any of its credential keys or its
/// base_url is set. Throws ConfigError for invalid values, including a
/// configured platform whose ConnectorConfig fails validation.
AppConfig build_app_config(const ConfigMap& config);

struct FieldCheck {
  std::string key;
  bool ok = false;
  std::string problem;  // empty when ok
};

struct PlatformCheck {
  Platform platform = Platform::twitter;
  bool configured = false;
  std::vector<FieldCheck> fields;

  bool ok() const;
};

/// Per-field credential report for all three platforms. Never includes
/// credential values.
std::vector<PlatformCheck> check_config(const ConfigMap& config);

}  // namespace sociohub
