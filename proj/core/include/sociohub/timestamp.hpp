#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace sociohub {

/// UTC wall-clock instant at whole-second precision.
using Timestamp = std::chrono::sys_seconds;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp ts);

/// Parses the exact form produced by format_iso8601. Throws std::invalid_argument.
Timestamp parse_iso8601(std::string_view text);

Timestamp utc_now();

}  // namespace sociohub
