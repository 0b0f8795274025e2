#include "sociohub/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sociohub/unicode.hpp"

namespace sociohub {

namespace {

std::string key_for(Platform p, std::string_view field) {
  return std::string(to_string(p)) + "." + std::string(field);
}

const std::vector<std::string_view>& connector_fields(Platform p) {
  // Credential fields plus the endpoint; mastodon's base_url is already a
  // credential field.
  static const std::array<std::vector<std::string_view>, 3> fields = [] {
    std::array<std::vector<std::string_view>, 3> out;
    for (Platform q : kAllPlatforms) {
      out[index_of(q)] = credential_fields(q);
      if (q != Platform::mastodon) out[index_of(q)].push_back("base_url");
    }
    return out;
  }();
  return fields[index_of(p)];
}

std::string lookup(const ConfigMap& config, const std::string& key) {
  const auto it = config.find(key);
  return it == config.end() ? std::string{} : it->second;
}

CredentialSet credentials_from(const ConfigMap& config, Platform p) {
  const auto get = [&](std::string_view field) { return lookup(config, key_for(p, field)); };
  switch (p) {
    case Platform::twitter:
      return TwitterCredentials{get("api_key"), get("api_key_secret"), get("access_token"),
                                get("access_token_secret")};
    case Platform::instagram:
      return InstagramCredentials{get("username"), get("password")};
    case Platform::mastodon:
      return MastodonCredentials{get("access_token"), get("base_url")};
  }
  return TwitterCredentials{};
}

double positive_number(const ConfigMap& config, const std::string& key, double fallback) {
  const auto it = config.find(key);
  if (it == config.end()) return fallback;
  const std::string& text = it->second;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0.0)) {
    throw ConfigError(key + " must be a positive number");
  }
  return value;
}

int positive_int(const ConfigMap& config, const std::string& key, int fallback) {
  const auto it = config.find(key);
  if (it == config.end()) return fallback;
  const std::string& text = it->second;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0) {
    throw ConfigError(key + " must be a positive integer");
  }
  return value;
}

bool is_configured(const ConfigMap& config, Platform p) {
  return std::any_of(connector_fields(p).begin(), connector_fields(p).end(),
                     [&](std::string_view field) { return config.count(key_for(p, field)) > 0; });
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (Platform p : kAllPlatforms) {
      for (auto field : connector_fields(p)) out.push_back(key_for(p, field));
      out.push_back(key_for(p, "timeout_seconds"));
      out.push_back("rate." + std::string(to_string(p)) + ".capacity");
      out.push_back("rate." + std::string(to_string(p)) + ".window_seconds");
    }
    out.insert(out.end(), {"store.backend", "store.path", "ui.dir"});
    return out;
  }();
  return keys;
}

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    const auto& known = known_config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    config[key] = std::string(trim(line.substr(eq + 1)));
  }
  return config;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* value = std::getenv(name.c_str())) return std::string(value);
  return std::nullopt;
}

std::string env_name_for(std::string_view key) {
  std::string out = "SOCIOHUB_";
  for (char c : key) {
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void apply_env_overrides(ConfigMap& config, const EnvLookup& env) {
  for (const auto& key : known_config_keys()) {
    if (auto value = env(env_name_for(key))) config[key] = std::move(*value);
  }
}

AppConfig build_app_config(const ConfigMap& config) {
  AppConfig app;
  for (Platform p : kAllPlatforms) {
    const std::string name(to_string(p));
    auto& rate = app.rate_limits[index_of(p)];
    rate.capacity = positive_int(config, "rate." + name + ".capacity", rate.capacity);
    rate.window_seconds = positive_number(config, "rate." + name + ".window_seconds", rate.window_seconds);

    if (!is_configured(config, p)) continue;
    ConnectorConfig connector;
    connector.platform = p;
    connector.credentials = credentials_from(config, p);
    connector.base_url = lookup(config, key_for(p, "base_url"));
    connector.timeout = Seconds{positive_number(config, key_for(p, "timeout_seconds"), 10.0)};
    try {
      connector.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(name + ": " + e.what());
    }
    app.connectors.emplace(p, std::move(connector));
  }
  if (auto it = config.find("store.backend"); it != config.end()) app.store.backend = it->second;
  if (app.store.backend != "file" && app.store.backend != "memory") {
    throw ConfigError("store.backend must be file or memory (got '" + app.store.backend + "')");
  }
  if (auto it = config.find("store.path"); it != config.end()) app.store.path = it->second;
  if (auto it = config.find("ui.dir"); it != config.end() && !it->second.empty()) app.ui_dir = it->second;
  return app;
}

bool PlatformCheck::ok() const {
  return std::all_of(fields.begin(), fields.end(), [](const FieldCheck& f) { return f.ok; });
}

std::vector<PlatformCheck> check_config(const ConfigMap& config) {
  std::vector<PlatformCheck> report;
  for (Platform p : kAllPlatforms) {
    PlatformCheck check{p, is_configured(config, p), {}};
    const CredentialCheck creds = validate_credentials(credentials_from(config, p));
    for (auto field : connector_fields(p)) {
      FieldCheck f{key_for(p, field), true, {}};
      const std::string value = lookup(config, f.key);
      const bool credential_failed =
          std::find(creds.missing.begin(), creds.missing.end(), field) != creds.missing.end();
      const bool url_failed = field == "base_url" && !is_absolute_url(value);
      if (credential_failed || url_failed) {
        f.ok = false;
        if (trim(value).empty()) {
          f.problem = "missing";
        } else {
          f.problem = field == "base_url" ? "not an absolute URL" : "invalid";
        }
      }
      check.fields.push_back(std::move(f));
    }
    report.push_back(std::move(check));
  }
  return report;
}

}  // namespace sociohub
