#include "sociohub/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dialects.hpp"
#include "http_runner.hpp"
#include "sociohub/rate_limit.hpp"
#include "sociohub/unicode.hpp"

namespace sociohub {

using detail::Json;

FixtureParseError::FixtureParseError(const std::string& message, std::string field,
                                     std::optional<std::size_t> line)
    : std::runtime_error(message), field_(std::move(field)), line_(line) {}

DuplicateHandle::DuplicateHandle(Platform platform, const std::string& handle)
    : std::runtime_error("duplicate " + std::string(to_string(platform)) + " handle '" + handle +
                         "'") {}

std::string_view FixtureUser::handle() const noexcept {
  return std::visit(
      [](const auto& u) -> std::string_view {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, RawTwitterUser>) {
          return u.screen_name;
        } else {
          return u.username;
        }
      },
      raw);
}

std::string_view FixtureUser::display_name() const noexcept {
  return std::visit(
      [](const auto& u) -> std::string_view {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, RawTwitterUser>) {
          return u.name;
        } else if constexpr (std::is_same_v<T, RawInstagramUser>) {
          return u.full_name;
        } else {
          return u.display_name;
        }
      },
      raw);
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& problem) {
  throw FixtureParseError(field + ": " + problem, field, std::nullopt);
}

std::string string_at(const Json& object, const std::string& key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) fail(path + "." + key, "missing");
  if (!it->is_string()) fail(path + "." + key, "must be a string");
  return it->get<std::string>();
}

std::int64_t positive_int_at(const Json& object, const std::string& key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) fail(path + "." + key, "missing");
  if (!it->is_number_integer() || it->get<std::int64_t>() <= 0) {
    fail(path + "." + key, "must be a positive integer");
  }
  return it->get<std::int64_t>();
}

void check_object(const Json& json, const std::string& path) {
  if (!json.is_object()) fail(path, "must be an object");
}

PlatformFaults parse_platform_faults(const Json& json, const std::string& path) {
  check_object(json, path);
  PlatformFaults faults;
  for (const auto& [key, value] : json.items()) {
    const std::string field = path + "." + key;
    if (key == "rate_limit") {
      if (value.is_null()) continue;
      check_object(value, field);
      RateLimitFault rl;
      rl.capacity = static_cast<int>(positive_int_at(value, "capacity", field));
      const auto window = value.find("window_seconds");
      if (window == value.end() || !window->is_number() || !(window->get<double>() > 0.0)) {
        fail(field + ".window_seconds", "must be a positive number");
      }
      rl.window_seconds = window->get<double>();
      rl.retry_after_seconds = static_cast<int>(positive_int_at(value, "retry_after_seconds", field));
      faults.rate_limit = rl;
    } else if (key == "fail_auth") {
      if (!value.is_boolean()) fail(field, "must be a boolean");
      faults.fail_auth = value.get<bool>();
    } else if (key == "latency_ms") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        fail(field, "must be a non-negative integer");
      }
      faults.latency_ms = static_cast<int>(value.get<std::int64_t>());
    } else if (key == "fail_requests") {
      if (!value.is_array()) fail(field, "must be an array of request indices");
      for (const auto& index : value) {
        if (!index.is_number_integer() || index.get<std::int64_t>() < 0) {
          fail(field, "request indices must be non-negative integers");
        }
        faults.fail_requests.insert(index.get<std::uint64_t>());
      }
    } else {
      fail(field, "unknown fault key");
    }
  }
  return faults;
}

template <typename Credentials>
Credentials parse_credentials(const Json& all, Platform platform);

template <>
TwitterCredentials parse_credentials(const Json& all, Platform platform) {
  const std::string path = "credentials." + std::string(to_string(platform));
  const auto it = all.find(to_string(platform));
  if (it == all.end()) fail(path, "missing");
  check_object(*it, path);
  return {string_at(*it, "api_key", path), string_at(*it, "api_key_secret", path),
          string_at(*it, "access_token", path), string_at(*it, "access_token_secret", path)};
}

template <>
InstagramCredentials parse_credentials(const Json& all, Platform platform) {
  const std::string path = "credentials." + std::string(to_string(platform));
  const auto it = all.find(to_string(platform));
  if (it == all.end()) fail(path, "missing");
  check_object(*it, path);
  return {string_at(*it, "username", path), string_at(*it, "password", path)};
}

template <>
MastodonCredentials parse_credentials(const Json& all, Platform platform) {
  const std::string path = "credentials." + std::string(to_string(platform));
  const auto it = all.find(to_string(platform));
  if (it == all.end()) fail(path, "missing");
  check_object(*it, path);
  return {string_at(*it, "access_token", path), string_at(*it, "base_url", path)};
}

void require_valid(const CredentialSet& credentials) {
  const auto check = validate_credentials(credentials);
  if (!check.ok()) {
    const std::string path = "credentials." + std::string(to_string(platform_of(credentials)));
    fail(path + "." + check.missing.front(), "missing or invalid");
  }
}

}  // namespace

FixtureCorpus parse_fixtures(std::string_view document) {
  Json json;
  try {
    json = Json::parse(document);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, document.size());
    const auto prefix = document.substr(0, offset == 0 ? 0 : offset - 1);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '\n'));
    throw FixtureParseError("line " + std::to_string(line) + ": " + e.what(), "", line);
  }
  check_object(json, "<document>");

  FixtureCorpus corpus;
  for (const auto& [key, value] : json.items()) {
    if (parse_platform(key) || key == "credentials" || key == "faults") continue;
    fail(key, "unknown top-level key");
  }

  for (Platform p : kAllPlatforms) {
    const std::string name(to_string(p));
    const auto it = json.find(name);
    if (it == json.end()) continue;
    if (!it->is_array()) fail(name, "must be an array of users");
    std::set<std::string, std::less<>> seen;
    auto& users = corpus.users[index_of(p)];
    std::size_t i = 0;
    for (const auto& entry : *it) {
      const std::string path = name + "[" + std::to_string(i++) + "]";
      FixtureUser user;
      try {
        user = detail::fixture_user_from_json(p, entry);
      } catch (const SchemaError& e) {
        fail(path, e.what());
      }
      if (user.handle().empty()) fail(path, "handle must not be empty");
      if (!seen.emplace(user.handle()).second) throw DuplicateHandle(p, std::string(user.handle()));
      users.push_back(std::move(user));
    }
  }

  const auto creds = json.find("credentials");
  if (creds == json.end()) fail("credentials", "missing");
  check_object(*creds, "credentials");
  corpus.twitter_credentials = parse_credentials<TwitterCredentials>(*creds, Platform::twitter);
  corpus.instagram_credentials = parse_credentials<InstagramCredentials>(*creds, Platform::instagram);
  corpus.mastodon_credentials = parse_credentials<MastodonCredentials>(*creds, Platform::mastodon);
  require_valid(corpus.twitter_credentials);
  require_valid(corpus.instagram_credentials);
  require_valid(corpus.mastodon_credentials);

  if (const auto faults = json.find("faults"); faults != json.end()) {
    check_object(*faults, "faults");
    for (const auto& [key, value] : faults->items()) {
      const auto p = parse_platform(key);
      if (!p) fail("faults." + key, "unknown platform");
      corpus.faults[*p] = parse_platform_faults(value, "faults." + key);
    }
  }
  return corpus;
}

FixtureCorpus load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureParseError("cannot read fixture file " + path.string(), "", std::nullopt);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fixtures(buffer.str());
}

std::string simulate_search(const FixtureCorpus& corpus, Platform platform, std::string_view query,
                            std::size_t limit) {
  const std::u32string needle = fold_for_matching(query);
  std::vector<const FixtureUser*> hits;
  if (!needle.empty()) {
    for (const auto& user : corpus.users_of(platform)) {
      if (fold_for_matching(user.handle()).find(needle) != std::u32string::npos ||
          fold_for_matching(user.display_name()).find(needle) != std::u32string::npos) {
        hits.push_back(&user);
      }
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const FixtureUser* a, const FixtureUser* b) { return a->handle() < b->handle(); });
  if (hits.size() > limit) hits.resize(limit);
  return detail::encode_search_payload(platform, hits);
}

struct SimulatorServer::Impl {
  explicit Impl(FixtureCorpus c) : corpus(std::move(c)) { reset_buckets(); }

  void reset_buckets() {
    const SteadyInstant now = SteadyClock::now();
    for (Platform p : kAllPlatforms) {
      const auto& rl = corpus.faults[p].rate_limit;
      buckets[index_of(p)] =
          rl ? std::optional(RateBudget::full(p, rl->capacity, Seconds{rl->window_seconds}, now))
             : std::nullopt;
    }
  }

  bool authorized(Platform p, const httplib::Request& req) {
    if (corpus.faults[p].fail_auth) return false;
    switch (p) {
      case Platform::twitter:
        return req.get_header_value("Authorization") ==
               "OAuth " + corpus.twitter_credentials.api_key + ":" +
                   corpus.twitter_credentials.access_token;
      case Platform::instagram: {
        std::lock_guard lock(mutex);
        return sessions.count(req.get_header_value("X-Session")) > 0;
      }
      case Platform::mastodon:
        return req.get_header_value("Authorization") ==
               "Bearer " + corpus.mastodon_credentials.access_token;
    }
    return false;
  }

  static void send_error(httplib::Response& res, int status, std::string_view error) {
    res.status = status;
    res.set_content(detail::dump(Json{{"error", error}}), "application/json");
  }

  void handle_search(Platform p, const httplib::Request& req, httplib::Response& res) {
    const std::uint64_t index = counters[index_of(p)].fetch_add(1);
    const PlatformFaults& faults = corpus.faults[p];
    if (faults.latency_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(faults.latency_ms));

    if (faults.fail_requests.count(index) > 0) return send_error(res, 500, "injected failure");
    if (!authorized(p, req)) return send_error(res, 401, "unauthorized");
    if (faults.rate_limit) {
      std::lock_guard lock(mutex);
      auto& bucket = *buckets[index_of(p)];
      auto [outcome, next] = acquire(bucket, std::max(SteadyClock::now(), bucket.last_refill));
      bucket = next;
      if (!is_granted(outcome)) {
        res.set_header("Retry-After", std::to_string(faults.rate_limit->retry_after_seconds));
        return send_error(res, 429, "rate limited");
      }
    }

    const std::string query = req.get_param_value(std::string(detail::query_param_name(p)));
    if (trim(query).empty()) return send_error(res, 400, "missing query");
    std::size_t limit = 20;
    if (const std::string raw = req.get_param_value(std::string(detail::limit_param_name(p)));
        !raw.empty()) {
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), limit);
      if (ec != std::errc{} || ptr != raw.data() + raw.size() || limit == 0) {
        return send_error(res, 400, "invalid limit");
      }
    }
    res.set_content(simulate_search(corpus, p, query, limit), "application/json");
  }

  void handle_session(const httplib::Request& req, httplib::Response& res) {
    sessions_opened.fetch_add(1);
    if (corpus.faults[Platform::instagram].fail_auth) return send_error(res, 401, "unauthorized");
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error&) {
      return send_error(res, 400, "invalid JSON");
    }
    if (!body.is_object() || body.value("username", "") != corpus.instagram_credentials.username ||
        body.value("password", "") != corpus.instagram_credentials.password) {
      return send_error(res, 401, "unauthorized");
    }
    std::string token;
    {
      std::lock_guard lock(mutex);
      token = "sim-session-" + std::to_string(++next_session);
      sessions.insert(token);
    }
    res.set_content(detail::dump(Json{{"session_token", token}}), "application/json");
  }

  Json counters_json() const {
    Json out = Json::object();
    for (Platform p : kAllPlatforms) out[std::string(to_string(p))] = counters[index_of(p)].load();
    out["instagram_sessions"] = sessions_opened.load();
    return out;
  }

  void reset() {
    std::lock_guard lock(mutex);
    for (auto& c : counters) c.store(0);
    sessions_opened.store(0);
    sessions.clear();
    reset_buckets();
  }

  const FixtureCorpus corpus;
  std::array<std::atomic<std::uint64_t>, 3> counters{};
  std::atomic<std::uint64_t> sessions_opened{0};
  std::mutex mutex;  // buckets, sessions
  std::array<std::optional<RateBudget>, 3> buckets;
  std::set<std::string> sessions;
  std::uint64_t next_session = 0;
  detail::BackgroundServer http;
};

SimulatorServer::SimulatorServer(FixtureCorpus corpus)
    : impl_(std::make_unique<Impl>(std::move(corpus))) {
  auto& server = impl_->http.server();
  Impl* impl = impl_.get();
  for (Platform p : kAllPlatforms) {
    const std::string path = "/" + std::string(to_string(p)) + std::string(detail::search_path(p));
    server.Get(path, [impl, p](const httplib::Request& req, httplib::Response& res) {
      impl->handle_search(p, req, res);
    });
  }
  server.Post("/instagram/session", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle_session(req, res);
  });
  server.Get("/_admin/counters", [impl](const httplib::Request&, httplib::Response& res) {
    res.set_content(detail::dump(impl->counters_json()), "application/json");
  });
  server.Post("/_admin/reset", [impl](const httplib::Request&, httplib::Response& res) {
    impl->reset();
    res.set_content(detail::dump(impl->counters_json()), "application/json");
  });
}

SimulatorServer::~SimulatorServer() { stop(); }

void SimulatorServer::start(const std::string& host, int port) { impl_->http.start(host, port); }

void SimulatorServer::stop() { impl_->http.stop(); }

int SimulatorServer::port() const noexcept { return impl_->http.port(); }

std::string SimulatorServer::base_url(Platform platform) const {
  return "http://" + impl_->http.host() + ":" + std::to_string(port()) + "/" +
         std::string(to_string(platform));
}

std::array<std::uint64_t, 3> SimulatorServer::counters() const {
  return {impl_->counters[0].load(), impl_->counters[1].load(), impl_->counters[2].load()};
}

std::uint64_t SimulatorServer::session_count() const { return impl_->sessions_opened.load(); }

void SimulatorServer::reset() { impl_->reset(); }

}  // namespace sociohub
