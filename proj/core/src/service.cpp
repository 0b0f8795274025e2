#include "sociohub/service.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "json_codec.hpp"
#include "sociohub/unicode.hpp"

namespace sociohub {

namespace detail {

Json result_to_json(const CrossPlatformResult& result) {
  Json out = Json::object();
  out["record"] = record_to_json(result.record);
  out["partial"] = result.partial;
  return out;
}

}  // namespace detail

std::string serialize_result(const CrossPlatformResult& result) {
  return detail::dump(detail::result_to_json(result));
}

AggregationService::AggregationService(std::vector<std::shared_ptr<Connector>> connectors,
                                       QueryStore& store)
    : store_(store) {
  for (auto& connector : connectors) {
    if (!connector) throw std::invalid_argument("null connector");
    const Platform p = connector->platform();
    if (!connectors_.emplace(p, std::move(connector)).second) {
      throw std::invalid_argument("duplicate connector for " + std::string(to_string(p)));
    }
  }
}

std::vector<Platform> AggregationService::configured_platforms() const {
  std::vector<Platform> out;
  for (const auto& [p, c] : connectors_) out.push_back(p);
  return out;
}

CrossPlatformResult AggregationService::aggregate_search(const SearchRequest& request) {
  const std::string query(trim(request.query));
  if (query.empty()) throw InvalidQuery("query is empty after trimming");
  if (request.limit < 1 || request.limit > kMaxSearchLimit) {
    throw InvalidQuery("limit must be within [1, 50]");
  }
  if (!(request.threshold >= 0.0 && request.threshold <= 1.0)) {
    throw InvalidQuery("threshold must be within [0, 1]");
  }
  std::vector<Platform> platforms = request.platforms;
  std::sort(platforms.begin(), platforms.end());
  platforms.erase(std::unique(platforms.begin(), platforms.end()), platforms.end());
  if (platforms.empty()) throw InvalidQuery("no platforms requested");
  for (Platform p : platforms) {
    if (!connectors_.count(p)) {
      throw InvalidQuery("platform " + std::string(to_string(p)) + " is not configured");
    }
  }

  std::vector<std::future<SearchOutcome>> pending;
  pending.reserve(platforms.size());
  for (Platform p : platforms) {
    Connector* connector = connectors_.at(p).get();
    pending.push_back(std::async(std::launch::async, [connector, &query, &request]() -> SearchOutcome {
      try {
        return connector->search_users(query, request.limit);
      } catch (const std::exception& e) {
        return ConnectorError::network(e.what());
      }
    }));
  }

  QueryRecord record;
  record.query = query;
  record.requested_platforms = platforms;
  std::vector<UnifiedProfile> merged;
  bool partial = false;
  for (std::size_t i = 0; i < platforms.size(); ++i) {
    SearchOutcome outcome = pending[i].get();
    if (auto* profiles = std::get_if<std::vector<UnifiedProfile>>(&outcome)) {
      std::move(profiles->begin(), profiles->end(), std::back_inserter(merged));
      record.statuses[platforms[i]] = StatusOk{0};
    } else {
      record.statuses[platforms[i]] = status_from_error(std::get<ConnectorError>(outcome));
      partial = true;
    }
  }

  record.results = rank_results(query, merged, static_cast<std::size_t>(request.limit) * platforms.size(),
                                MatchScore{request.threshold});
  for (const auto& r : record.results) {
    if (auto* ok = std::get_if<StatusOk>(&record.statuses[r.profile.platform])) ++ok->count;
  }

  const std::string id = store_.persist_query(std::move(record));
  auto stored = store_.get_query(id);
  if (!stored) throw StorageError("persisted record " + id + " is not retrievable");
  return {std::move(*stored), partial};
}

}  // namespace sociohub
