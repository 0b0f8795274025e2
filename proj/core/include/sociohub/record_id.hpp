#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <string_view>

namespace sociohub {

/// True for a 26-character Crockford base32 identifier whose first symbol
/// fits in 3 bits (i.e. it encodes 128 bits).
bool is_record_id(std::string_view id) noexcept;

/// Time-ordered 128-bit identifiers: 48-bit millisecond timestamp followed by
/// 80 random bits, rendered as 26 Crockford base32 symbols. Ids from one
/// generator strictly increase, even within the same millisecond or when the
/// clock steps backwards.
class RecordIdGenerator {
 public:
  RecordIdGenerator();
  explicit RecordIdGenerator(std::uint64_t seed);

  std::string next(std::chrono::system_clock::time_point now);

  /// Ensures later ids sort after `existing_id` (ignored if malformed).
  void observe(std::string_view existing_id);

 private:
  std::mutex mutex_;
  std::mt19937_64 rng_;
  std::uint64_t last_hi_ = 0;  // 48-bit ms << 16 | top 16 random bits
  std::uint64_t last_lo_ = 0;  // low 64 random bits
  bool has_last_ = false;
};

}  // namespace sociohub
