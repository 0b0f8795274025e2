#include "sociohub/credentials.hpp"

#include <cctype>

namespace sociohub {

Platform platform_of(const CredentialSet& credentials) noexcept {
  return static_cast<Platform>(credentials.index());
}

const std::vector<std::string_view>& credential_fields(Platform platform) {
  static const std::vector<std::string_view> twitter{"api_key", "api_key_secret", "access_token",
                                                     "access_token_secret"};
  static const std::vector<std::string_view> instagram{"username", "password"};
  static const std::vector<std::string_view> mastodon{"access_token", "base_url"};
  switch (platform) {
    case Platform::twitter:
      return twitter;
    case Platform::instagram:
      return instagram;
    case Platform::mastodon:
      return mastodon;
  }
  return twitter;
}

bool is_absolute_url(std::string_view url) {
  const auto sep = url.find("://");
  if (sep == std::string_view::npos || sep == 0) return false;
  const std::string_view scheme = url.substr(0, sep);
  if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) return false;
  for (char c : scheme) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  std::string_view authority = url.substr(sep + 3);
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  if (!host.empty() && host.front() == '[') {
    const auto close = host.find(']');
    if (close == std::string_view::npos || close == 1) return false;
    return true;
  }
  if (const auto colon = host.rfind(':'); colon != std::string_view::npos) {
    const std::string_view port = host.substr(colon + 1);
    for (char c : port) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    host = host.substr(0, colon);
  }
  if (host.empty()) return false;
  for (char c : host) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

CredentialCheck validate_credentials(const CredentialSet& credentials) {
  CredentialCheck check;
  const auto require = [&](std::string_view name, const std::string& value) {
    if (value.empty()) check.missing.emplace_back(name);
  };
  if (const auto* t = std::get_if<TwitterCredentials>(&credentials)) {
    require("api_key", t->api_key);
    require("api_key_secret", t->api_key_secret);
    require("access_token", t->access_token);
    require("access_token_secret", t->access_token_secret);
  } else if (const auto* i = std::get_if<InstagramCredentials>(&credentials)) {
    require("username", i->username);
    require("password", i->password);
  } else if (const auto* m = std::get_if<MastodonCredentials>(&credentials)) {
    require("access_token", m->access_token);
    if (!is_absolute_url(m->base_url)) check.missing.emplace_back("base_url");
  }
  return check;
}

}  // namespace sociohub
