#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sociohub/platform.hpp"
#include "sociohub/timestamp.hpp"

namespace sociohub {

/// A payload did not have the platform's declared raw shape.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The normalized record every platform maps into: five core attributes
/// (handle, display_name, bio, followers, following) plus a location that
/// only twitter profiles carry.
struct UnifiedProfile {
  Platform platform = Platform::twitter;
  std::string handle;
  std::string display_name;
  std::string bio;
  std::int64_t followers = 0;
  std::int64_t following = 0;
  std::optional<std::string> location;
  Timestamp retrieved_at{};

  friend bool operator==(const UnifiedProfile&, const UnifiedProfile&) = default;
};

struct RawTwitterUser {
  std::string name;
  std::string screen_name;
  std::string description;
  std::int64_t followers_count = 0;
  std::int64_t friends_count = 0;
  std::string location;

  friend bool operator==(const RawTwitterUser&, const RawTwitterUser&) = default;
};

struct RawInstagramUser {
  std::string full_name;
  std::string username;
  std::string biography;
  std::int64_t followers = 0;
  std::int64_t followees = 0;

  friend bool operator==(const RawInstagramUser&, const RawInstagramUser&) = default;
};

struct RawMastodonUser {
  std::string display_name;
  std::string username;
  std::string note;
  std::int64_t followers_count = 0;
  std::int64_t following_count = 0;

  friend bool operator==(const RawMastodonUser&, const RawMastodonUser&) = default;
};

/// Alternative index matches Platform.
using RawUser = std::variant<RawTwitterUser, RawInstagramUser, RawMastodonUser>;

Platform platform_of(const RawUser& raw) noexcept;

/// Decodes one user object in the platform's raw field names. Extra members
/// are ignored. Throws SchemaError on a missing or mistyped field, a negative
/// count, or a count that is not a JSON integer.
RawUser decode_raw_user(Platform platform, std::string_view json_object);

/// Maps a raw user onto the unified schema. Throws SchemaError if the raw
/// shape does not belong to `platform`, a count is negative, or the handle is
/// empty.
UnifiedProfile normalize_profile(Platform platform, const RawUser& raw, Timestamp retrieved_at);

/// decode_raw_user followed by normalize_profile.
UnifiedProfile normalize_profile(Platform platform, std::string_view json_object,
                                 Timestamp retrieved_at);

/// (raw field, unified field) pairs in the order the platform's attributes
/// are listed; exactly the mapping normalize_profile applies.
const std::vector<std::pair<std::string_view, std::string_view>>& platform_field_map(
    Platform platform);

/// Canonical flat serialization: keys platform, handle, display_name, bio,
/// followers, following, location (omitted when absent), retrieved_at.
std::string serialize_profile(const UnifiedProfile& profile);

/// Inverse of serialize_profile. Throws SchemaError.
UnifiedProfile parse_profile(std::string_view json_object);

}  // namespace sociohub
