#pragma once

// Internal JSON encoding of the domain types. Only core sources include this.

#include <json.hpp>

#include <string>
#include <string_view>

#include "sociohub/profile.hpp"

namespace sociohub {
struct QueryRecord;
struct CrossPlatformResult;
}  // namespace sociohub

namespace sociohub::detail {

using Json = nlohmann::ordered_json;

Json profile_to_json(const UnifiedProfile& profile);
UnifiedProfile profile_from_json(const Json& json);

/// Raw-user decoding shared by the connectors and the fixture loader.
RawUser raw_user_from_json(Platform platform, const Json& json);
Json raw_user_to_json(const RawUser& raw);

const Json& require_member(const Json& object, std::string_view key);
std::string require_string(const Json& object, std::string_view key);
std::int64_t require_count(const Json& object, std::string_view key);

Json record_to_json(const QueryRecord& record);
QueryRecord record_from_json(const Json& json);
Json result_to_json(const CrossPlatformResult& result);

inline std::string dump(const Json& json) {
  return json.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

}  // namespace sociohub::detail
