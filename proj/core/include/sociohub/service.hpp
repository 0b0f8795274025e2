#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sociohub/connector.hpp"
#include "sociohub/store.hpp"

namespace sociohub {

class InvalidQuery : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SearchRequest {
  std::string query;
  std::vector<Platform> platforms{kAllPlatforms.begin(), kAllPlatforms.end()};
  int limit = static_cast<int>(kDefaultLimit);
  double threshold = kDefaultThreshold;
};

struct CrossPlatformResult {
  QueryRecord record;
  bool partial = false;  // some platform reported an error
};

std::string serialize_result(const CrossPlatformResult& result);

/// Fans one query out to the platform connectors, merges and ranks what comes
/// back, and persists the outcome.
class AggregationService {
 public:
  AggregationService(std::vector<std::shared_ptr<Connector>> connectors, QueryStore& store);

  /// Throws InvalidQuery for an empty query, a bad limit/threshold, an empty
  /// or unconfigured platform list. Platform failures never throw; they
  /// become error statuses.
  CrossPlatformResult aggregate_search(const SearchRequest& request);

  std::vector<Platform> configured_platforms() const;

 private:
  std::map<Platform, std::shared_ptr<Connector>> connectors_;
  QueryStore& store_;
};

/// JSON HTTP API over an AggregationService and its store.
class ApiServer {
 public:
  ApiServer(AggregationService& service, QueryStore& store,
            std::optional<std::string> static_dir = std::nullopt);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Throws BindError.
  void start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sociohub
