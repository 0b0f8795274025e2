#pragma once

// Wire dialects shared by the connectors (decode side) and the simulator
// (encode side).

#include <string>
#include <string_view>
#include <vector>

#include "json_codec.hpp"
#include "sociohub/simulator.hpp"

namespace sociohub::detail {

/// "protected", "is_private", "locked".
std::string_view privacy_flag_name(Platform platform) noexcept;

/// Path below the base_url where the dialect's user search lives.
std::string_view search_path(Platform platform) noexcept;

/// Name of the query-string parameter carrying the search text.
std::string_view query_param_name(Platform platform) noexcept;

/// Name of the query-string parameter carrying the result limit.
std::string_view limit_param_name(Platform platform) noexcept;

/// Parses a search response body. Throws SchemaError.
std::vector<FixtureUser> decode_search_payload(Platform platform, std::string_view body);

/// Decodes one dialect user object including its optional privacy flag.
FixtureUser fixture_user_from_json(Platform platform, const Json& json);
Json fixture_user_to_json(const FixtureUser& user);

/// Wraps encoded users in the dialect's envelope (bare array, "users" or
/// "accounts").
std::string encode_search_payload(Platform platform, const std::vector<const FixtureUser*>& users);

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash, may be empty
};

/// Throws std::invalid_argument when the URL is not absolute.
Endpoint split_base_url(std::string_view base_url);

}  // namespace sociohub::detail
