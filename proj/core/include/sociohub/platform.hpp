#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace sociohub {

/// The three supported platforms. Enumerator order is the canonical order
/// used wherever platforms are sorted or listed.
enum class Platform { twitter = 0, instagram = 1, mastodon = 2 };

inline constexpr std::array<Platform, 3> kAllPlatforms{Platform::twitter, Platform::instagram,
                                                       Platform::mastodon};

std::string_view to_string(Platform platform) noexcept;

/// Accepts exactly "twitter", "instagram" or "mastodon".
std::optional<Platform> parse_platform(std::string_view name) noexcept;

constexpr std::size_t index_of(Platform platform) noexcept {
  return static_cast<std::size_t>(platform);
}

}  // namespace sociohub
