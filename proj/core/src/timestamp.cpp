#include "sociohub/timestamp.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace sociohub {

std::string format_iso8601(Timestamp ts) {
  const std::time_t t = ts.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  int value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed ISO-8601 timestamp");
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    throw std::invalid_argument("malformed ISO-8601 timestamp: " + std::string(text));
  }
  std::tm tm{};
  tm.tm_year = digits(text, 0, 4) - 1900;
  tm.tm_mon = digits(text, 5, 2) - 1;
  tm.tm_mday = digits(text, 8, 2);
  tm.tm_hour = digits(text, 11, 2);
  tm.tm_min = digits(text, 14, 2);
  tm.tm_sec = digits(text, 17, 2);
  if (tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 || tm.tm_hour > 23 || tm.tm_min > 59 ||
      tm.tm_sec > 60) {
    throw std::invalid_argument("out-of-range ISO-8601 timestamp: " + std::string(text));
  }
  const Timestamp ts{std::chrono::seconds{timegm(&tm)}};
  if (format_iso8601(ts) != text) {
    throw std::invalid_argument("non-canonical ISO-8601 timestamp: " + std::string(text));
  }
  return ts;
}

Timestamp utc_now() {
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace sociohub
