#include "dialects.hpp"

#include <stdexcept>

#include "sociohub/credentials.hpp"

namespace sociohub::detail {

std::string_view privacy_flag_name(Platform platform) noexcept {
  switch (platform) {
    case Platform::twitter:
      return "protected";
    case Platform::instagram:
      return "is_private";
    case Platform::mastodon:
      return "locked";
  }
  return "protected";
}

std::string_view search_path(Platform platform) noexcept {
  switch (platform) {
    case Platform::twitter:
      return "/1.1/users/search.json";
    case Platform::instagram:
      return "/search/users";
    case Platform::mastodon:
      return "/api/v2/search";
  }
  return "";
}

std::string_view query_param_name(Platform platform) noexcept {
  return platform == Platform::instagram ? "query" : "q";
}

std::string_view limit_param_name(Platform platform) noexcept {
  return platform == Platform::mastodon ? "limit" : "count";
}

FixtureUser fixture_user_from_json(Platform platform, const Json& json) {
  FixtureUser user{raw_user_from_json(platform, json), std::nullopt};
  const auto flag = json.find(privacy_flag_name(platform));
  if (flag != json.end() && !flag->is_null()) {
    if (!flag->is_boolean()) {
      throw SchemaError("field '" + std::string(privacy_flag_name(platform)) +
                        "' must be a boolean");
    }
    user.private_flag = flag->get<bool>();
  }
  return user;
}

Json fixture_user_to_json(const FixtureUser& user) {
  Json out = raw_user_to_json(user.raw);
  if (user.private_flag) out[std::string(privacy_flag_name(platform_of(user.raw)))] = *user.private_flag;
  return out;
}

std::vector<FixtureUser> decode_search_payload(Platform platform, std::string_view body) {
  Json json;
  try {
    json = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  const Json* list = &json;
  if (platform == Platform::instagram) {
    list = &require_member(json, "users");
  } else if (platform == Platform::mastodon) {
    list = &require_member(json, "accounts");
  }
  if (!list->is_array()) throw SchemaError("search payload must contain an array of users");

  std::vector<FixtureUser> users;
  users.reserve(list->size());
  for (const auto& entry : *list) users.push_back(fixture_user_from_json(platform, entry));
  return users;
}

std::string encode_search_payload(Platform platform, const std::vector<const FixtureUser*>& users) {
  Json list = Json::array();
  for (const FixtureUser* user : users) list.push_back(fixture_user_to_json(*user));
  switch (platform) {
    case Platform::twitter:
      return dump(list);
    case Platform::instagram:
      return dump(Json{{"users", std::move(list)}});
    case Platform::mastodon:
      return dump(Json{{"accounts", std::move(list)}});
  }
  return dump(list);
}

Endpoint split_base_url(std::string_view base_url) {
  if (!is_absolute_url(base_url)) {
    throw std::invalid_argument("not an absolute URL: " + std::string(base_url));
  }
  const auto authority_start = base_url.find("://") + 3;
  const auto path_start = base_url.find_first_of("/?#", authority_start);
  Endpoint endpoint;
  endpoint.origin = std::string(base_url.substr(0, path_start));
  if (path_start != std::string_view::npos) {
    std::string_view path = base_url.substr(path_start);
    path = path.substr(0, path.find_first_of("?#"));
    while (!path.empty() && path.back() == '/') path.remove_suffix(1);
    endpoint.prefix = std::string(path);
  }
  return endpoint;
}

}  // namespace sociohub::detail
