#include "sociohub/record_id.hpp"

#include <array>

namespace sociohub {

namespace {

constexpr std::string_view kAlphabet = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";
constexpr std::size_t kIdLength = 26;
constexpr std::uint64_t kMaxMillis = (std::uint64_t{1} << 48) - 1;

int symbol_value(char c) noexcept {
  const auto pos = kAlphabet.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

// 128-bit value as (hi, lo), most significant symbol first.
std::string encode(std::uint64_t hi, std::uint64_t lo) {
  std::string out(kIdLength, '0');
  for (std::size_t i = kIdLength; i-- > 0;) {
    out[i] = kAlphabet[lo & 0x1F];
    lo = (lo >> 5) | (hi << 59);
    hi >>= 5;
  }
  return out;
}

bool decode(std::string_view id, std::uint64_t& hi, std::uint64_t& lo) noexcept {
  if (!is_record_id(id)) return false;
  hi = 0;
  lo = 0;
  for (char c : id) {
    const auto v = static_cast<std::uint64_t>(symbol_value(c));
    hi = (hi << 5) | (lo >> 59);
    lo = (lo << 5) | v;
  }
  return true;
}

}  // namespace

bool is_record_id(std::string_view id) noexcept {
  if (id.size() != kIdLength) return false;
  if (symbol_value(id[0]) < 0 || symbol_value(id[0]) > 7) return false;
  for (char c : id) {
    if (symbol_value(c) < 0) return false;
  }
  return true;
}

RecordIdGenerator::RecordIdGenerator() : rng_(std::random_device{}()) {}

RecordIdGenerator::RecordIdGenerator(std::uint64_t seed) : rng_(seed) {}

std::string RecordIdGenerator::next(std::chrono::system_clock::time_point now) {
  std::lock_guard lock(mutex_);
  const auto ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count());
  const std::uint64_t millis = std::min(ms, kMaxMillis);

  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  if (has_last_ && millis <= (last_hi_ >> 16)) {
    // Same or earlier millisecond: increment the previous id.
    hi = last_hi_;
    lo = last_lo_ + 1;
    if (lo == 0) ++hi;
  } else {
    hi = (millis << 16) | (rng_() & 0xFFFF);
    lo = rng_();
  }
  last_hi_ = hi;
  last_lo_ = lo;
  has_last_ = true;
  return encode(hi, lo);
}

void RecordIdGenerator::observe(std::string_view existing_id) {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  if (!decode(existing_id, hi, lo)) return;
  std::lock_guard lock(mutex_);
  if (!has_last_ || hi > last_hi_ || (hi == last_hi_ && lo > last_lo_)) {
    last_hi_ = hi;
    last_lo_ = lo;
    has_last_ = true;
  }
}

}  // namespace sociohub
