#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sociohub/credentials.hpp"
#include "sociohub/profile.hpp"

namespace sociohub {

class FixtureParseError : public std::runtime_error {
 public:
  FixtureParseError(const std::string& message, std::string field, std::optional<std::size_t> line);

  /// Path of the offending member, e.g. "twitter[2].followers_count".
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

class DuplicateHandle : public std::runtime_error {
 public:
  DuplicateHandle(Platform platform, const std::string& handle);
};

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixtureUser {
  RawUser raw;
  /// Dialect privacy flag (protected / is_private / locked); absent = public.
  std::optional<bool> private_flag;

  bool is_private() const noexcept { return private_flag.value_or(false); }
  std::string_view handle() const noexcept;
  std::string_view display_name() const noexcept;
};

struct RateLimitFault {
  int capacity = 1;
  double window_seconds = 1.0;
  int retry_after_seconds = 1;
};

struct PlatformFaults {
  std::optional<RateLimitFault> rate_limit;
  bool fail_auth = false;
  int latency_ms = 0;
  /// Zero-based search-request indices answered with 500.
  std::set<std::uint64_t> fail_requests;
};

struct FaultPlan {
  std::array<PlatformFaults, 3> platforms;

  PlatformFaults& operator[](Platform p) { return platforms[index_of(p)]; }
  const PlatformFaults& operator[](Platform p) const { return platforms[index_of(p)]; }
};

struct FixtureCorpus {
  std::array<std::vector<FixtureUser>, 3> users;
  TwitterCredentials twitter_credentials;
  InstagramCredentials instagram_credentials;
  MastodonCredentials mastodon_credentials;
  FaultPlan faults;

  const std::vector<FixtureUser>& users_of(Platform p) const { return users[index_of(p)]; }
};

/// Parses a fixture document. Throws FixtureParseError or DuplicateHandle.
FixtureCorpus parse_fixtures(std::string_view document);

/// Reads and parses a fixture file. Throws FixtureParseError (also for an
/// unreadable path) or DuplicateHandle.
FixtureCorpus load_fixtures(const std::filesystem::path& path);

/// The platform-dialect response body for a search: every user whose folded
/// handle or display name contains the folded query, by handle ascending,
/// truncated to `limit`. Private users are included with their flag set.
std::string simulate_search(const FixtureCorpus& corpus, Platform platform, std::string_view query,
                            std::size_t limit);

/// Hermetic HTTP mock of all three dialects on one port, under the path
/// prefixes /twitter, /instagram and /mastodon.
class SimulatorServer {
 public:
  explicit SimulatorServer(FixtureCorpus corpus);
  ~SimulatorServer();

  SimulatorServer(const SimulatorServer&) = delete;
  SimulatorServer& operator=(const SimulatorServer&) = delete;

  /// Binds (port 0 picks a free port) and starts serving on a background
  /// thread. Throws BindError.
  void start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

  int port() const noexcept;
  /// e.g. "http://127.0.0.1:34567/mastodon"
  std::string base_url(Platform platform) const;

  /// Search requests received per platform, faulted ones included.
  std::array<std::uint64_t, 3> counters() const;
  std::uint64_t session_count() const;
  /// Zeroes counters and restarts rate-limit buckets and sessions.
  void reset();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sociohub
