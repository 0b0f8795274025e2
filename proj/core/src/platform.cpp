#include "sociohub/platform.hpp"

namespace sociohub {

std::string_view to_string(Platform platform) noexcept {
  switch (platform) {
    case Platform::twitter:
      return "twitter";
    case Platform::instagram:
      return "instagram";
    case Platform::mastodon:
      return "mastodon";
  }
  return "unknown";
}

std::optional<Platform> parse_platform(std::string_view name) noexcept {
  for (Platform p : kAllPlatforms) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

}  // namespace sociohub
