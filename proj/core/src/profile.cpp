#include "sociohub/profile.hpp"

#include <stdexcept>

#include "json_codec.hpp"

namespace sociohub {

using detail::Json;

namespace detail {

const Json& require_member(const Json& object, std::string_view key) {
  if (!object.is_object()) throw SchemaError("expected a JSON object");
  const auto it = object.find(key);
  if (it == object.end()) throw SchemaError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string require_string(const Json& object, std::string_view key) {
  const Json& value = require_member(object, key);
  if (!value.is_string()) throw SchemaError("field '" + std::string(key) + "' must be a string");
  return value.get<std::string>();
}

std::int64_t require_count(const Json& object, std::string_view key) {
  const Json& value = require_member(object, key);
  if (value.is_number_unsigned()) {
    const auto v = value.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) {
      throw SchemaError("field '" + std::string(key) + "' is out of range");
    }
    return static_cast<std::int64_t>(v);
  }
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v < 0) throw SchemaError("field '" + std::string(key) + "' must be non-negative");
    return v;
  }
  throw SchemaError("field '" + std::string(key) + "' must be a non-negative integer");
}

RawUser raw_user_from_json(Platform platform, const Json& json) {
  if (!json.is_object()) throw SchemaError("user entry must be a JSON object");
  switch (platform) {
    case Platform::twitter:
      return RawTwitterUser{require_string(json, "name"),
                            require_string(json, "screen_name"),
                            require_string(json, "description"),
                            require_count(json, "followers_count"),
                            require_count(json, "friends_count"),
                            require_string(json, "location")};
    case Platform::instagram:
      return RawInstagramUser{require_string(json, "full_name"), require_string(json, "username"),
                              require_string(json, "biography"), require_count(json, "followers"),
                              require_count(json, "followees")};
    case Platform::mastodon:
      return RawMastodonUser{require_string(json, "display_name"), require_string(json, "username"),
                             require_string(json, "note"), require_count(json, "followers_count"),
                             require_count(json, "following_count")};
  }
  throw SchemaError("unknown platform");
}

Json raw_user_to_json(const RawUser& raw) {
  Json out = Json::object();
  if (const auto* t = std::get_if<RawTwitterUser>(&raw)) {
    out["name"] = t->name;
    out["screen_name"] = t->screen_name;
    out["description"] = t->description;
    out["followers_count"] = t->followers_count;
    out["friends_count"] = t->friends_count;
    out["location"] = t->location;
  } else if (const auto* i = std::get_if<RawInstagramUser>(&raw)) {
    out["full_name"] = i->full_name;
    out["username"] = i->username;
    out["biography"] = i->biography;
    out["followers"] = i->followers;
    out["followees"] = i->followees;
  } else if (const auto* m = std::get_if<RawMastodonUser>(&raw)) {
    out["display_name"] = m->display_name;
    out["username"] = m->username;
    out["note"] = m->note;
    out["followers_count"] = m->followers_count;
    out["following_count"] = m->following_count;
  }
  return out;
}

Json profile_to_json(const UnifiedProfile& profile) {
  Json out = Json::object();
  out["platform"] = std::string(to_string(profile.platform));
  out["handle"] = profile.handle;
  out["display_name"] = profile.display_name;
  out["bio"] = profile.bio;
  out["followers"] = profile.followers;
  out["following"] = profile.following;
  if (profile.location) out["location"] = *profile.location;
  out["retrieved_at"] = format_iso8601(profile.retrieved_at);
  return out;
}

UnifiedProfile profile_from_json(const Json& json) {
  UnifiedProfile p;
  const auto platform = parse_platform(require_string(json, "platform"));
  if (!platform) throw SchemaError("unknown platform");
  p.platform = *platform;
  p.handle = require_string(json, "handle");
  p.display_name = require_string(json, "display_name");
  p.bio = require_string(json, "bio");
  p.followers = require_count(json, "followers");
  p.following = require_count(json, "following");
  if (json.contains("location")) p.location = require_string(json, "location");
  try {
    p.retrieved_at = parse_iso8601(require_string(json, "retrieved_at"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return p;
}

}  // namespace detail

Platform platform_of(const RawUser& raw) noexcept { return static_cast<Platform>(raw.index()); }

RawUser decode_raw_user(Platform platform, std::string_view json_object) {
  Json json;
  try {
    json = Json::parse(json_object);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return detail::raw_user_from_json(platform, json);
}

UnifiedProfile normalize_profile(Platform platform, const RawUser& raw, Timestamp retrieved_at) {
  if (platform_of(raw) != platform) {
    throw SchemaError("raw user shape does not belong to platform " +
                      std::string(to_string(platform)));
  }
  UnifiedProfile out;
  out.platform = platform;
  out.retrieved_at = retrieved_at;
  if (const auto* t = std::get_if<RawTwitterUser>(&raw)) {
    out.display_name = t->name;
    out.handle = t->screen_name;
    out.bio = t->description;
    out.followers = t->followers_count;
    out.following = t->friends_count;
    if (!t->location.empty()) out.location = t->location;
  } else if (const auto* i = std::get_if<RawInstagramUser>(&raw)) {
    out.display_name = i->full_name;
    out.handle = i->username;
    out.bio = i->biography;
    out.followers = i->followers;
    out.following = i->followees;
  } else if (const auto* m = std::get_if<RawMastodonUser>(&raw)) {
    out.display_name = m->display_name;
    out.handle = m->username;
    out.bio = m->note;
    out.followers = m->followers_count;
    out.following = m->following_count;
  }
  if (out.followers < 0 || out.following < 0) throw SchemaError("counts must be non-negative");
  if (out.handle.empty()) throw SchemaError("handle must not be empty");
  return out;
}

UnifiedProfile normalize_profile(Platform platform, std::string_view json_object,
                                 Timestamp retrieved_at) {
  return normalize_profile(platform, decode_raw_user(platform, json_object), retrieved_at);
}

const std::vector<std::pair<std::string_view, std::string_view>>& platform_field_map(
    Platform platform) {
  static const std::vector<std::pair<std::string_view, std::string_view>> twitter{
      {"name", "display_name"},           {"screen_name", "handle"},
      {"description", "bio"},             {"followers_count", "followers"},
      {"friends_count", "following"},     {"location", "location"}};
  static const std::vector<std::pair<std::string_view, std::string_view>> instagram{
      {"full_name", "display_name"}, {"username", "handle"},       {"biography", "bio"},
      {"followers", "followers"},    {"followees", "following"}};
  static const std::vector<std::pair<std::string_view, std::string_view>> mastodon{
      {"display_name", "display_name"}, {"username", "handle"},
      {"note", "bio"},                  {"followers_count", "followers"},
      {"following_count", "following"}};
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

std::string serialize_profile(const UnifiedProfile& profile) {
  return detail::dump(detail::profile_to_json(profile));
}

UnifiedProfile parse_profile(std::string_view json_object) {
  Json json;
  try {
    json = Json::parse(json_object);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return detail::profile_from_json(json);
}

}  // namespace sociohub
