#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <json.hpp>
#include <thread>

#include "sociohub/service.hpp"
#include "sociohub/simulator.hpp"
#include "support/oracles.hpp"
#include "support/test_env.hpp"

namespace sociohub {
namespace {

using nlohmann::json;
using testing::config_for;
using testing::demo_corpus;
using testing::fixed_time;

// Connector returning a canned outcome after an optional delay.
class StubConnector : public Connector {
 public:
  StubConnector(Platform p, SearchOutcome outcome, std::chrono::milliseconds delay = {})
      : platform_(p), outcome_(std::move(outcome)), delay_(delay) {}

  Platform platform() const noexcept override { return platform_; }

  SearchOutcome search_users(std::string_view, int limit) override {
    ++calls;
    std::this_thread::sleep_for(delay_);
    if (throws) throw std::runtime_error("connector blew up");
    auto out = outcome_;
    if (auto* list = std::get_if<std::vector<UnifiedProfile>>(&out)) {
      if (list->size() > static_cast<std::size_t>(limit)) list->resize(limit);
    }
    return out;
  }

  std::atomic<int> calls{0};
  bool throws = false;

 private:
  Platform platform_;
  SearchOutcome outcome_;
  std::chrono::milliseconds delay_;
};

UnifiedProfile person(Platform p, std::string handle, std::int64_t followers) {
  UnifiedProfile u;
  u.platform = p;
  u.handle = std::move(handle);
  u.display_name = u.handle;
  u.followers = followers;
  u.retrieved_at = fixed_time();
  return u;
}

std::vector<UnifiedProfile> ada_family(Platform p) {
  return {person(p, "ada", 10), person(p, "adam", 20), person(p, "bob", 30)};
}

struct StubRig {
  std::shared_ptr<StubConnector> twitter =
      std::make_shared<StubConnector>(Platform::twitter, ada_family(Platform::twitter));
  std::shared_ptr<StubConnector> instagram =
      std::make_shared<StubConnector>(Platform::instagram, ada_family(Platform::instagram));
  std::shared_ptr<StubConnector> mastodon =
      std::make_shared<StubConnector>(Platform::mastodon, ada_family(Platform::mastodon));
  MemoryQueryStore store;

  AggregationService service() { return AggregationService({twitter, instagram, mastodon}, store); }
};

TEST(AggregationServiceTest, MergesRanksAndPersists) {
  StubRig rig;
  auto service = rig.service();
  const auto result = service.aggregate_search({"ada"});
  EXPECT_FALSE(result.partial);
  const auto& r = result.record;
  EXPECT_EQ(r.query, "ada");
  EXPECT_EQ(r.requested_platforms,
            (std::vector<Platform>{Platform::twitter, Platform::instagram, Platform::mastodon}));
  // bob scores 0.8 * (1 - 3/3) = 0, below the default threshold.
  ASSERT_EQ(r.results.size(), 6u);
  for (Platform p : kAllPlatforms) EXPECT_EQ(r.statuses.at(p), PlatformStatus{StatusOk{2}});
  EXPECT_EQ(r.results[0].profile.handle, "ada");
  EXPECT_EQ(r.results[0].profile.platform, Platform::twitter);
  EXPECT_EQ(r.results[3].profile.handle, "adam");
  EXPECT_NO_THROW(check_record_invariants(r));
  EXPECT_EQ(rig.store.get_query(r.id), r);
}

TEST(AggregationServiceTest, MatchesRankingOracle) {
  StubRig rig;
  auto service = rig.service();
  const auto result = service.aggregate_search({"adam", {Platform::twitter, Platform::mastodon}, 2, 0.3});
  std::vector<UnifiedProfile> merged;
  for (Platform p : {Platform::twitter, Platform::mastodon}) {
    auto family = ada_family(p);
    family.resize(2);
    merged.insert(merged.end(), family.begin(), family.end());
  }
  oracle::CachedDistance distance;
  const auto expected = oracle::oracle_rank("adam", merged, 4, 0.3, distance);
  ASSERT_EQ(result.record.results.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(result.record.results[i].profile, expected[i].profile);
    EXPECT_NEAR(result.record.results[i].score.value(), expected[i].score, 1e-12);
  }
  EXPECT_EQ(rig.instagram->calls, 0);
}

TEST(AggregationServiceTest, InvalidRequestsPersistNothing) {
  StubRig rig;
  auto service = rig.service();
  const std::vector<SearchRequest> bad = {
      {""}, {"   "}, {"ada", {}}, {"ada", {Platform::twitter}, 0}, {"ada", {Platform::twitter}, 51},
      {"ada", {Platform::twitter}, 10, -0.1}, {"ada", {Platform::twitter}, 10, 1.5}};
  for (const auto& request : bad) EXPECT_THROW(service.aggregate_search(request), InvalidQuery);

  MemoryQueryStore store;
  AggregationService only_twitter({rig.twitter}, store);
  EXPECT_THROW(only_twitter.aggregate_search({"ada", {Platform::mastodon}}), InvalidQuery);

  EXPECT_EQ(rig.store.list_queries(0, 10).total, 0u);
  EXPECT_EQ(store.list_queries(0, 10).total, 0u);
  EXPECT_EQ(rig.twitter->calls + rig.instagram->calls + rig.mastodon->calls, 0);
}

TEST(AggregationServiceTest, PartialFailureKeepsOtherPlatforms) {
  StubRig rig;
  rig.mastodon = std::make_shared<StubConnector>(Platform::mastodon, ConnectorError::rate_limited(15));
  rig.instagram->throws = true;
  auto service = rig.service();
  const auto result = service.aggregate_search({"ada"});
  EXPECT_TRUE(result.partial);
  const auto& statuses = result.record.statuses;
  EXPECT_EQ(statuses.at(Platform::twitter), PlatformStatus{StatusOk{2}});
  const auto& limited = std::get<StatusError>(statuses.at(Platform::mastodon));
  EXPECT_EQ(limited.kind, ConnectorErrorKind::rate_limited);
  EXPECT_EQ(limited.retry_after_seconds, 15.0);
  EXPECT_EQ(std::get<StatusError>(statuses.at(Platform::instagram)).kind, ConnectorErrorKind::network);
  for (const auto& r : result.record.results) EXPECT_EQ(r.profile.platform, Platform::twitter);
  EXPECT_EQ(rig.store.list_queries(0, 10).total, 1u);
}

TEST(AggregationServiceTest, DuplicatePlatformsCollapse) {
  StubRig rig;
  auto service = rig.service();
  const auto result =
      service.aggregate_search({"ada", {Platform::mastodon, Platform::twitter, Platform::mastodon}});
  EXPECT_EQ(result.record.requested_platforms,
            (std::vector<Platform>{Platform::twitter, Platform::mastodon}));
  EXPECT_EQ(rig.mastodon->calls, 1);
}

TEST(AggregationServiceTest, FanOutRunsConcurrently) {
  const auto delay = std::chrono::milliseconds(200);
  auto t = std::make_shared<StubConnector>(Platform::twitter, ada_family(Platform::twitter), delay);
  auto i = std::make_shared<StubConnector>(Platform::instagram, ada_family(Platform::instagram), delay);
  auto m = std::make_shared<StubConnector>(Platform::mastodon, ada_family(Platform::mastodon), delay);
  MemoryQueryStore store;
  AggregationService service({t, i, m}, store);
  const auto start = std::chrono::steady_clock::now();
  service.aggregate_search({"ada"});
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(450));
}

TEST(AggregationServiceTest, RejectsDuplicateConnectors) {
  StubRig rig;
  EXPECT_THROW(AggregationService({rig.twitter, rig.twitter}, rig.store), std::invalid_argument);
}

// Full stack: simulator, connectors, service, store and HTTP API.
class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override { start(demo_corpus()); }

  void start(FixtureCorpus corpus) {
    corpus_ = std::move(corpus);
    sim_ = std::make_unique<SimulatorServer>(corpus_);
    sim_->start();
    auto limiter = testing::roomy_limiter();
    std::vector<std::shared_ptr<Connector>> connectors;
    for (Platform p : kAllPlatforms) {
      connectors.push_back(make_connector(config_for(*sim_, corpus_, p), limiter, fixed_time));
    }
    service_ = std::make_unique<AggregationService>(std::move(connectors), store_);
    api_ = std::make_unique<ApiServer>(*service_, store_);
    api_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", api_->port());
  }

  json get_json(const std::string& path, int expected_status) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << path << " " << res->body;
    return json::parse(res->body);
  }

  FixtureCorpus corpus_;
  std::unique_ptr<SimulatorServer> sim_;
  MemoryQueryStore store_;
  std::unique_ptr<AggregationService> service_;
  std::unique_ptr<ApiServer> api_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ApiTest, Health) {
  const auto body = get_json("/api/health", 200);
  EXPECT_EQ(body.at("status"), "ok");
  EXPECT_EQ(body.at("platforms_configured"), json({"twitter", "instagram", "mastodon"}));
}

TEST_F(ApiTest, SearchHistoryRecordAndExport) {
  const auto search = get_json("/api/search?q=ada&limit=5", 200);
  EXPECT_EQ(search.at("partial"), false);
  const auto& record = search.at("record");
  const std::string id = record.at("id");
  for (const char* p : {"twitter", "instagram", "mastodon"}) {
    EXPECT_EQ(record.at("statuses").at(p).at("state"), "ok");
  }
  EXPECT_FALSE(record.at("results").empty());

  EXPECT_EQ(get_json("/api/queries/" + id, 200), record);

  const auto history = get_json("/api/queries?page_size=1", 200);
  EXPECT_EQ(history.at("total"), 1);
  EXPECT_EQ(history.at("queries").at(0).at("id"), id);

  auto csv = client_->Get("/api/export/" + id + "?format=csv");
  ASSERT_TRUE(csv);
  EXPECT_EQ(csv->status, 200);
  EXPECT_EQ(csv->get_header_value("Content-Type"), "text/csv; charset=utf-8");
  EXPECT_EQ(csv->get_header_value("Content-Disposition"),
            "attachment; filename=\"sociohub-" + id + ".csv\"");
  EXPECT_EQ(oracle::parse_csv(csv->body).size(), record.at("results").size() + 1);

  auto lines = client_->Get("/api/export/" + id);
  ASSERT_TRUE(lines);
  EXPECT_EQ(lines->get_header_value("Content-Type"), "application/x-ndjson");
  EXPECT_EQ(std::count(lines->body.begin(), lines->body.end(), '\n'),
            static_cast<long>(record.at("results").size() + 1));
}

TEST_F(ApiTest, ErrorResponses) {
  EXPECT_EQ(get_json("/api/search?q=%20%20", 400).at("error"), "InvalidQuery");
  EXPECT_EQ(get_json("/api/search", 400).at("error"), "InvalidQuery");
  EXPECT_EQ(get_json("/api/search?q=ada&limit=abc", 400).at("error"), "InvalidRequest");
  EXPECT_EQ(get_json("/api/search?q=ada&limit=0", 400).at("error"), "InvalidQuery");
  EXPECT_EQ(get_json("/api/search?q=ada&platforms=myspace", 400).at("error"), "InvalidRequest");
  EXPECT_EQ(get_json("/api/queries?page_size=0", 400).at("error"), "InvalidRequest");
  EXPECT_EQ(get_json("/api/queries/01HZZZZZZZZZZZZZZZZZZZZZZZ", 404).at("error"), "NotFound");
  EXPECT_EQ(get_json("/api/export/nope?format=csv", 404).at("error"), "NotFound");
  EXPECT_EQ(get_json("/api/export/nope?format=xml", 400).at("error"), "InvalidRequest");
  EXPECT_EQ(store_.list_queries(0, 10).total, 0u);
}

TEST_F(ApiTest, PlatformSubset) {
  const auto search = get_json("/api/search?q=ada&platforms=mastodon", 200);
  EXPECT_EQ(search.at("record").at("requested_platforms"), json({"mastodon"}));
  for (const auto& r : search.at("record").at("results")) {
    EXPECT_EQ(r.at("profile").at("platform"), "mastodon");
  }
  EXPECT_EQ(sim_->counters()[index_of(Platform::twitter)], 0u);
}

TEST_F(ApiTest, ConcurrentSearchesStayIsolated) {
  std::vector<std::thread> threads;
  std::vector<json> bodies(6);
  const std::vector<std::string> queries = {"ada", "grace", "ada", "lin", "grace", "ada"};
  for (std::size_t i = 0; i < queries.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client client("127.0.0.1", api_->port());
      auto res = client.Get("/api/search?q=" + queries[i]);
      if (res && res->status == 200) bodies[i] = json::parse(res->body);
    });
  }
  for (auto& t : threads) t.join();
  std::set<std::string> ids;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    ASSERT_FALSE(bodies[i].is_null()) << i;
    EXPECT_EQ(bodies[i].at("record").at("query"), queries[i]);
    ids.insert(bodies[i].at("record").at("id").get<std::string>());
    const auto stored = store_.get_query(bodies[i].at("record").at("id").get<std::string>());
    ASSERT_TRUE(stored);
    EXPECT_EQ(stored->query, queries[i]);
  }
  EXPECT_EQ(ids.size(), queries.size());
  // Same query, same clock: identical results across concurrent runs.
  EXPECT_EQ(bodies[0].at("record").at("results"), bodies[2].at("record").at("results"));
  EXPECT_EQ(bodies[0].at("record").at("results"), bodies[5].at("record").at("results"));
}

}  // namespace
}  // namespace sociohub
