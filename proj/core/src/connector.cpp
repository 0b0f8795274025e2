#include "sociohub/connector.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "dialects.hpp"
#include "sociohub/unicode.hpp"

namespace sociohub {

ConnectorError ConnectorError::auth(std::string detail) {
  return {ConnectorErrorKind::auth, std::move(detail), std::nullopt};
}

ConnectorError ConnectorError::rate_limited(double retry_after_seconds) {
  if (!(retry_after_seconds > 0.0)) throw std::invalid_argument("retry_after must be positive");
  std::string detail = "retry after ";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, retry_after_seconds);
  detail.append(buf, ec == std::errc{} ? end : buf);
  detail += " s";
  return {ConnectorErrorKind::rate_limited, std::move(detail), retry_after_seconds};
}

ConnectorError ConnectorError::not_found(std::string detail) {
  return {ConnectorErrorKind::not_found, std::move(detail), std::nullopt};
}

ConnectorError ConnectorError::network(std::string detail) {
  return {ConnectorErrorKind::network, std::move(detail), std::nullopt};
}

ConnectorError ConnectorError::schema(std::string detail) {
  return {ConnectorErrorKind::schema, std::move(detail), std::nullopt};
}

std::string_view to_string(ConnectorErrorKind kind) noexcept {
  switch (kind) {
    case ConnectorErrorKind::auth:
      return "AuthError";
    case ConnectorErrorKind::rate_limited:
      return "RateLimited";
    case ConnectorErrorKind::not_found:
      return "NotFound";
    case ConnectorErrorKind::network:
      return "NetworkError";
    case ConnectorErrorKind::schema:
      return "SchemaError";
  }
  return "NetworkError";
}

std::optional<ConnectorErrorKind> parse_connector_error_kind(std::string_view tag) noexcept {
  for (auto kind : {ConnectorErrorKind::auth, ConnectorErrorKind::rate_limited,
                    ConnectorErrorKind::not_found, ConnectorErrorKind::network,
                    ConnectorErrorKind::schema}) {
    if (to_string(kind) == tag) return kind;
  }
  return std::nullopt;
}

bool CaseInsensitiveLess::operator()(std::string_view a, std::string_view b) const noexcept {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) < std::tolower(static_cast<unsigned char>(y));
  });
}

namespace {

std::optional<double> parse_delta_seconds(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) return std::nullopt;
  return static_cast<double>(value);
}

}  // namespace

ConnectorError classify_error(int status, const HeaderMap& headers, std::string_view body) {
  (void)body;
  switch (status) {
    case 401:
    case 403:
      return ConnectorError::auth("status " + std::to_string(status));
    case 404:
      return ConnectorError::not_found("status 404");
    case 429: {
      std::optional<double> retry;
      if (const auto it = headers.find("Retry-After"); it != headers.end()) {
        retry = parse_delta_seconds(it->second);
      }
      return ConnectorError::rate_limited(retry.value_or(kDefaultRetryAfterSeconds));
    }
    default:
      return ConnectorError::network("status " + std::to_string(status));
  }
}

void ConnectorConfig::validate() const {
  if (platform_of(credentials) != platform) {
    throw std::invalid_argument("credentials belong to " +
                                std::string(to_string(platform_of(credentials))) + ", not " +
                                std::string(to_string(platform)));
  }
  const CredentialCheck check = validate_credentials(credentials);
  if (!check.ok()) {
    std::string fields;
    for (const auto& f : check.missing) fields += (fields.empty() ? "" : ", ") + f;
    throw std::invalid_argument(std::string(to_string(platform)) + " credentials missing: " + fields);
  }
  if (!is_absolute_url(base_url)) {
    throw std::invalid_argument("base_url is not an absolute URL: " + base_url);
  }
  if (const auto* m = std::get_if<MastodonCredentials>(&credentials); m && m->base_url != base_url) {
    throw std::invalid_argument("mastodon base_url must equal the credential base_url");
  }
  if (!(timeout.count() > 0.0)) throw std::invalid_argument("timeout must be positive");
}

namespace {

HeaderMap to_header_map(const httplib::Headers& headers) {
  HeaderMap out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

class HttpConnector final : public Connector {
 public:
  HttpConnector(ConnectorConfig config, std::shared_ptr<RateLimiter> limiter, UtcClock clock)
      : config_(std::move(config)), limiter_(std::move(limiter)), clock_(std::move(clock)) {
    config_.validate();
    if (!limiter_) throw std::invalid_argument("connector needs a rate limiter");
    endpoint_ = detail::split_base_url(config_.base_url);
  }

  Platform platform() const noexcept override { return config_.platform; }

  SearchOutcome search_users(std::string_view query, int limit) override {
    const std::string_view trimmed = trim(query);
    if (trimmed.empty()) throw std::invalid_argument("query is empty after trimming");
    if (limit < 1 || limit > kMaxSearchLimit) {
      throw std::invalid_argument("limit must be within [1, 50]");
    }

    const AcquireOutcome permit = limiter_->acquire(config_.platform);
    if (const auto* retry = std::get_if<RetryAfter>(&permit)) {
      return ConnectorError::rate_limited(retry->wait.count());
    }

    httplib::Client client(endpoint_.origin);
    const auto secs = static_cast<time_t>(config_.timeout.count());
    const auto usecs = static_cast<time_t>((config_.timeout.count() - secs) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (const auto* t = std::get_if<TwitterCredentials>(&config_.credentials)) {
      headers.emplace("Authorization", "OAuth " + t->api_key + ":" + t->access_token);
    } else if (const auto* m = std::get_if<MastodonCredentials>(&config_.credentials)) {
      headers.emplace("Authorization", "Bearer " + m->access_token);
    } else if (const auto* i = std::get_if<InstagramCredentials>(&config_.credentials)) {
      auto session = open_instagram_session(client, *i);
      if (auto* error = std::get_if<ConnectorError>(&session)) return std::move(*error);
      headers.emplace("X-Session", std::get<std::string>(session));
    }

    httplib::Params params;
    params.emplace(detail::query_param_name(config_.platform), std::string(trimmed));
    if (config_.platform == Platform::mastodon) params.emplace("type", "accounts");
    params.emplace(detail::limit_param_name(config_.platform), std::to_string(limit));

    const std::string path = endpoint_.prefix + std::string(detail::search_path(config_.platform));
    const httplib::Result response = client.Get(path, params, headers);
    if (auto error = check_response(response)) return std::move(*error);

    std::vector<FixtureUser> users;
    try {
      users = detail::decode_search_payload(config_.platform, response->body);
    } catch (const SchemaError& e) {
      return ConnectorError::schema(e.what());
    }

    const Timestamp retrieved_at = clock_();
    std::vector<UnifiedProfile> profiles;
    for (const auto& user : users) {
      if (user.is_private()) continue;
      try {
        profiles.push_back(normalize_profile(config_.platform, user.raw, retrieved_at));
      } catch (const SchemaError& e) {
        return ConnectorError::schema(e.what());
      }
      if (profiles.size() == static_cast<std::size_t>(limit)) break;
    }
    return profiles;
  }

 private:
  std::optional<ConnectorError> check_response(const httplib::Result& response) {
    if (!response) return ConnectorError::network(httplib::to_string(response.error()));
    const int status = response->status;
    if (status >= 400) {
      ConnectorError error = classify_error(status, to_header_map(response->headers), response->body);
      if (error.kind == ConnectorErrorKind::rate_limited) {
        limiter_->observe_server_limit(config_.platform, Seconds{*error.retry_after_seconds});
      }
      return error;
    }
    if (status < 200 || status >= 300) {
      return ConnectorError::network("status " + std::to_string(status));
    }
    return std::nullopt;
  }

  std::variant<std::string, ConnectorError> open_instagram_session(
      httplib::Client& client, const InstagramCredentials& credentials) {
    const detail::Json body{{"username", credentials.username},
                            {"password", credentials.password}};
    const httplib::Result response =
        client.Post(endpoint_.prefix + "/session", detail::dump(body), "application/json");
    if (auto error = check_response(response)) return std::move(*error);
    try {
      const auto json = detail::Json::parse(response->body);
      const auto token = detail::require_string(json, "session_token");
      if (token.empty()) return ConnectorError::schema("empty session_token");
      return token;
    } catch (const detail::Json::parse_error& e) {
      return ConnectorError::schema(std::string("invalid session response: ") + e.what());
    } catch (const SchemaError& e) {
      return ConnectorError::schema(e.what());
    }
  }

  ConnectorConfig config_;
  detail::Endpoint endpoint_;
  std::shared_ptr<RateLimiter> limiter_;
  UtcClock clock_;
};

}  // namespace

std::unique_ptr<Connector> make_connector(ConnectorConfig config,
                                          std::shared_ptr<RateLimiter> limiter, UtcClock clock) {
  return std::make_unique<HttpConnector>(std::move(config), std::move(limiter), std::move(clock));
}

}  // namespace sociohub
