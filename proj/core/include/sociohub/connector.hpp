#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sociohub/credentials.hpp"
#include "sociohub/profile.hpp"
#include "sociohub/rate_limit.hpp"

namespace sociohub {

enum class ConnectorErrorKind { auth, rate_limited, not_found, network, schema };

/// Every wire failure a connector can report.
struct ConnectorError {
  ConnectorErrorKind kind = ConnectorErrorKind::network;
  std::string detail;
  /// Set only for rate_limited; always > 0.
  std::optional<double> retry_after_seconds;

  static ConnectorError auth(std::string detail);
  static ConnectorError rate_limited(double retry_after_seconds);
  static ConnectorError not_found(std::string detail = "not found");
  static ConnectorError network(std::string detail);
  static ConnectorError schema(std::string detail);

  friend bool operator==(const ConnectorError&, const ConnectorError&) = default;
};

/// "AuthError", "RateLimited", "NotFound", "NetworkError", "SchemaError".
std::string_view to_string(ConnectorErrorKind kind) noexcept;
std::optional<ConnectorErrorKind> parse_connector_error_kind(std::string_view tag) noexcept;

struct CaseInsensitiveLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept;
};

using HeaderMap = std::map<std::string, std::string, CaseInsensitiveLess>;

inline constexpr double kDefaultRetryAfterSeconds = 60.0;
inline constexpr int kMaxSearchLimit = 50;

/// Maps an error response (status >= 400) onto the taxonomy. 429 reads a
/// delta-seconds Retry-After, defaulting to 60 when absent, unparsable or 0.
ConnectorError classify_error(int status, const HeaderMap& headers, std::string_view body);

struct ConnectorConfig {
  Platform platform = Platform::twitter;
  std::string base_url;
  CredentialSet credentials;
  Seconds timeout{10.0};

  /// Throws std::invalid_argument when credentials belong to another
  /// platform, fail validate_credentials, base_url is not absolute, the
  /// mastodon base_url disagrees with its credential, or timeout <= 0.
  void validate() const;
};

using SearchOutcome = std::variant<std::vector<UnifiedProfile>, ConnectorError>;

using UtcClock = std::function<Timestamp()>;

/// Uniform "search users on one platform" contract.
class Connector {
 public:
  virtual ~Connector() = default;

  virtual Platform platform() const noexcept = 0;

  /// Consumes one rate-limiter token, then issues the platform's search
  /// request. Profiles the payload marks private are dropped. Throws
  /// std::invalid_argument for an empty query or a limit outside [1, 50];
  /// every other failure is returned as a ConnectorError.
  virtual SearchOutcome search_users(std::string_view query, int limit) = 0;
};

/// Connector speaking `config.platform`'s wire dialect. `clock` stamps
/// retrieved_at, once per search.
std::unique_ptr<Connector> make_connector(ConnectorConfig config,
                                          std::shared_ptr<RateLimiter> limiter,
                                          UtcClock clock = utc_now);

}  // namespace sociohub
