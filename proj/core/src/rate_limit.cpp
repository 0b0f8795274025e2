#include "sociohub/rate_limit.hpp"

#include <algorithm>

namespace sociohub {

RateBudget RateBudget::full(Platform platform, int capacity, Seconds window, SteadyInstant now) {
  if (capacity <= 0) throw std::invalid_argument("capacity must be positive");
  if (!(window.count() > 0.0)) throw std::invalid_argument("window must be positive");
  RateBudget b;
  b.platform = platform;
  b.capacity = capacity;
  b.refill_rate = capacity / window.count();
  b.tokens = capacity;
  b.last_refill = now;
  return b;
}

AcquireResult acquire(const RateBudget& budget, SteadyInstant now) {
  if (now < budget.last_refill) throw ClockRegression();

  RateBudget next = budget;
  const double elapsed = std::chrono::duration_cast<Seconds>(now - budget.last_refill).count();
  next.tokens = std::min<double>(budget.capacity, budget.tokens + budget.refill_rate * elapsed);
  next.last_refill = now;

  if (next.server_block_until && *next.server_block_until > now) {
    return {RetryAfter{std::chrono::duration_cast<Seconds>(*next.server_block_until - now)}, next};
  }
  if (next.tokens >= 1.0) {
    next.tokens -= 1.0;
    return {Granted{}, next};
  }
  return {RetryAfter{Seconds{(1.0 - next.tokens) / next.refill_rate}}, next};
}

RateBudget observe_server_limit(const RateBudget& budget, Seconds retry_after, SteadyInstant now) {
  if (!(retry_after.count() > 0.0)) throw std::invalid_argument("retry_after must be positive");
  RateBudget next = budget;
  const SteadyInstant until = now + std::chrono::duration_cast<SteadyClock::duration>(retry_after);
  next.server_block_until =
      budget.server_block_until ? std::max(*budget.server_block_until, until) : until;
  next.tokens = 0.0;
  // The emptied bucket starts refilling from now, not from the previous refill.
  next.last_refill = std::max(budget.last_refill, now);
  return next;
}

RateLimitSettings RateLimitSettings::defaults_for(Platform platform) noexcept {
  switch (platform) {
    case Platform::twitter:
      return {15, 900.0};
    case Platform::instagram:
      return {30, 600.0};
    case Platform::mastodon:
      return {300, 300.0};
  }
  return {1, 1.0};
}

RateLimitTable default_rate_limits() noexcept {
  return {RateLimitSettings::defaults_for(Platform::twitter),
          RateLimitSettings::defaults_for(Platform::instagram),
          RateLimitSettings::defaults_for(Platform::mastodon)};
}

RateLimiter::RateLimiter(const RateLimitTable& settings, ClockFn clock) : clock_(std::move(clock)) {
  const SteadyInstant now = clock_();
  for (Platform p : kAllPlatforms) {
    const auto& s = settings[index_of(p)];
    slots_[index_of(p)].budget = RateBudget::full(p, s.capacity, Seconds{s.window_seconds}, now);
  }
}

AcquireOutcome RateLimiter::acquire(Platform platform) {
  Slot& slot = slots_[index_of(platform)];
  std::lock_guard lock(slot.mutex);
  const SteadyInstant now = std::max(clock_(), slot.budget.last_refill);
  auto [outcome, budget] = sociohub::acquire(slot.budget, now);
  slot.budget = budget;
  return outcome;
}

void RateLimiter::observe_server_limit(Platform platform, Seconds retry_after) {
  Slot& slot = slots_[index_of(platform)];
  std::lock_guard lock(slot.mutex);
  slot.budget = sociohub::observe_server_limit(slot.budget, retry_after, clock_());
}

RateBudget RateLimiter::snapshot(Platform platform) const {
  const Slot& slot = slots_[index_of(platform)];
  std::lock_guard lock(slot.mutex);
  return slot.budget;
}

}  // namespace sociohub
