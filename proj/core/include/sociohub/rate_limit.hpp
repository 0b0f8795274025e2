#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <variant>

#include "sociohub/platform.hpp"

namespace sociohub {

using SteadyClock = std::chrono::steady_clock;
using SteadyInstant = SteadyClock::time_point;
using Seconds = std::chrono::duration<double>;

class ClockRegression : public std::logic_error {
 public:
  ClockRegression() : std::logic_error("monotonic instant earlier than last refill") {}
};

/// Token-bucket state for one platform. Tokens are fractional.
struct RateBudget {
  Platform platform = Platform::twitter;
  int capacity = 1;
  double refill_rate = 1.0;  // tokens per second
  double tokens = 1.0;
  SteadyInstant last_refill{};
  std::optional<SteadyInstant> server_block_until;

  /// A full bucket refilling capacity tokens per `window`.
  static RateBudget full(Platform platform, int capacity, Seconds window, SteadyInstant now);

  friend bool operator==(const RateBudget&, const RateBudget&) = default;
};

struct Granted {
  friend bool operator==(Granted, Granted) = default;
};

struct RetryAfter {
  Seconds wait{};

  friend bool operator==(const RetryAfter&, const RetryAfter&) = default;
};

using AcquireOutcome = std::variant<Granted, RetryAfter>;

inline bool is_granted(const AcquireOutcome& outcome) noexcept {
  return std::holds_alternative<Granted>(outcome);
}

struct AcquireResult {
  AcquireOutcome outcome;
  RateBudget budget;
};

/// Refills for the elapsed time, then grants one token or reports how long
/// until one is available. A server block overrides the bucket. Throws
/// ClockRegression when now < budget.last_refill.
AcquireResult acquire(const RateBudget& budget, SteadyInstant now);

/// Records a server-reported limit: blocks until max(existing, now +
/// retry_after) and empties the bucket. Throws std::invalid_argument unless
/// retry_after > 0.
RateBudget observe_server_limit(const RateBudget& budget, Seconds retry_after, SteadyInstant now);

struct RateLimitSettings {
  int capacity = 1;
  double window_seconds = 1.0;

  double refill_rate() const noexcept { return capacity / window_seconds; }

  /// twitter 15/900 s, instagram 30/600 s, mastodon 300/300 s.
  static RateLimitSettings defaults_for(Platform platform) noexcept;

  friend bool operator==(const RateLimitSettings&, const RateLimitSettings&) = default;
};

using RateLimitTable = std::array<RateLimitSettings, 3>;

RateLimitTable default_rate_limits() noexcept;

/// Owns one RateBudget per platform and serializes transitions per platform.
class RateLimiter {
 public:
  using ClockFn = std::function<SteadyInstant()>;

  explicit RateLimiter(const RateLimitTable& settings = default_rate_limits(),
                       ClockFn clock = [] { return SteadyClock::now(); });

  RateLimiter(const RateLimiter&) = delete;
  RateLimiter& operator=(const RateLimiter&) = delete;

  AcquireOutcome acquire(Platform platform);
  void observe_server_limit(Platform platform, Seconds retry_after);
  RateBudget snapshot(Platform platform) const;

 private:
  struct Slot {
    mutable std::mutex mutex;
    RateBudget budget;
  };

  ClockFn clock_;
  std::array<Slot, 3> slots_;
};

}  // namespace sociohub
