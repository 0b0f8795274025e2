#pragma once

#include <chrono>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sociohub/connector.hpp"
#include "sociohub/matching.hpp"
#include "sociohub/record_id.hpp"

namespace sociohub {

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StatusOk {
  std::size_t count = 0;

  friend bool operator==(const StatusOk&, const StatusOk&) = default;
};

struct StatusError {
  ConnectorErrorKind kind = ConnectorErrorKind::network;
  std::string detail;
  std::optional<double> retry_after_seconds;

  friend bool operator==(const StatusError&, const StatusError&) = default;
};

using PlatformStatus = std::variant<StatusOk, StatusError>;

PlatformStatus status_from_error(const ConnectorError& error);

struct QueryRecord {
  std::string id;
  std::string query;
  std::vector<Platform> requested_platforms;  // canonical order, no duplicates
  Timestamp created_at{};
  std::map<Platform, PlatformStatus> statuses;
  std::vector<RankedResult> results;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

/// Throws std::invalid_argument if a record invariant does not hold:
/// one status per requested platform, ok counts matching the per-platform
/// result counts, and results in rank order.
void check_record_invariants(const QueryRecord& record);

std::string serialize_record(const QueryRecord& record);
QueryRecord parse_record(std::string_view json);

struct QuerySummary {
  std::string id;
  std::string query;
  Timestamp created_at{};
  /// Results per requested platform.
  std::map<Platform, std::size_t> counts;

  friend bool operator==(const QuerySummary&, const QuerySummary&) = default;
};

QuerySummary summarize(const QueryRecord& record);

struct QueryPage {
  std::size_t total = 0;
  std::vector<QuerySummary> page;
};

enum class ExportFormat { jsonlines, csv };

std::optional<ExportFormat> parse_export_format(std::string_view name) noexcept;
std::string_view media_type(ExportFormat format) noexcept;
std::string_view file_extension(ExportFormat format) noexcept;

/// jsonlines: a {id, query, created_at} header line, then one canonical
/// profile per line. csv: fixed header row, one row per result in rank
/// order, RFC 4180 quoting, LF line endings.
std::string render_export(const QueryRecord& record, ExportFormat format);

inline constexpr std::string_view kCsvHeader =
    "query_id,query,platform,handle,display_name,bio,followers,following,location,retrieved_at";

inline constexpr std::size_t kMaxPageSize = 500;

/// Immutable query/result records addressed by id.
class QueryStore {
 public:
  using WallClock = std::function<std::chrono::system_clock::time_point()>;

  virtual ~QueryStore() = default;

  /// Assigns the record's id and created_at (one clock reading, taken under
  /// the write lock so that id order and creation order agree), stores it,
  /// and returns the id. Throws std::invalid_argument for a record violating
  /// its invariants and StorageError on backend failure.
  virtual std::string persist_query(QueryRecord record) = 0;

  /// nullopt for unknown or malformed ids.
  virtual std::optional<QueryRecord> get_query(std::string_view id) const = 0;

  /// Newest first. Throws std::invalid_argument unless 1 <= page_size <= 500.
  virtual QueryPage list_queries(std::size_t offset, std::size_t page_size) const = 0;

  std::optional<std::string> export_query(std::string_view id, ExportFormat format) const;
};

/// Records kept in memory only.
class MemoryQueryStore : public QueryStore {
 public:
  explicit MemoryQueryStore(WallClock clock = std::chrono::system_clock::now);

  std::string persist_query(QueryRecord record) override;
  std::optional<QueryRecord> get_query(std::string_view id) const override;
  QueryPage list_queries(std::size_t offset, std::size_t page_size) const override;

 protected:
  /// Called under the write lock after id/created_at assignment.
  virtual void append_durably(const QueryRecord& record);
  void load_existing(std::vector<QueryRecord> records);

 private:
  WallClock clock_;
  RecordIdGenerator ids_;
  mutable std::shared_mutex mutex_;
  std::vector<std::shared_ptr<const QueryRecord>> records_;  // id order
  std::unordered_map<std::string, std::size_t> index_;
};

/// Append-only file of one canonical record per line; the id index is
/// rebuilt on open.
class FileQueryStore : public MemoryQueryStore {
 public:
  /// Loads an existing file (a missing file is an empty store). Throws
  /// StorageError on unreadable or corrupt content.
  explicit FileQueryStore(std::filesystem::path path,
                          WallClock clock = std::chrono::system_clock::now);
  ~FileQueryStore() override;

  const std::filesystem::path& path() const noexcept { return path_; }

 protected:
  void append_durably(const QueryRecord& record) override;

 private:
  std::filesystem::path path_;
  std::FILE* out_ = nullptr;
};

struct StoreSettings {
  std::string backend = "file";
  std::filesystem::path path = "sociohub-queries.jsonl";
};

/// "file" or "memory". Throws StorageError for any other backend.
std::unique_ptr<QueryStore> open_store(const StoreSettings& settings);

}  // namespace sociohub
