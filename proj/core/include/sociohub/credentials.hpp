#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sociohub/platform.hpp"

namespace sociohub {

struct TwitterCredentials {
  std::string api_key;
  std::string api_key_secret;
  std::string access_token;
  std::string access_token_secret;

  friend bool operator==(const TwitterCredentials&, const TwitterCredentials&) = default;
};

struct InstagramCredentials {
  std::string username;
  std::string password;

  friend bool operator==(const InstagramCredentials&, const InstagramCredentials&) = default;
};

/// Mastodon instances are self-hosted, so the instance URL is part of the
/// credential.
struct MastodonCredentials {
  std::string access_token;
  std::string base_url;

  friend bool operator==(const MastodonCredentials&, const MastodonCredentials&) = default;
};

/// Alternative index matches Platform, so the tag always agrees with the
/// platform it authenticates against.
using CredentialSet = std::variant<TwitterCredentials, InstagramCredentials, MastodonCredentials>;

Platform platform_of(const CredentialSet& credentials) noexcept;

struct CredentialCheck {
  /// Failing field names in declaration order.
  std::vector<std::string> missing;

  bool ok() const noexcept { return missing.empty(); }
};

CredentialCheck validate_credentials(const CredentialSet& credentials);

/// Field names a platform's credential requires, in declaration order.
const std::vector<std::string_view>& credential_fields(Platform platform);

/// `scheme://authority[/path]` with a non-empty host.
bool is_absolute_url(std::string_view url);

}  // namespace sociohub
