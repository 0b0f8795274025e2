#include "sociohub/store.hpp"

#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>

#include "json_codec.hpp"

namespace sociohub {

using detail::Json;

PlatformStatus status_from_error(const ConnectorError& error) {
  return StatusError{error.kind, error.detail, error.retry_after_seconds};
}

void check_record_invariants(const QueryRecord& record) {
  if (record.requested_platforms.empty()) {
    throw std::invalid_argument("record requests no platforms");
  }
  if (!std::is_sorted(record.requested_platforms.begin(), record.requested_platforms.end()) ||
      std::adjacent_find(record.requested_platforms.begin(), record.requested_platforms.end()) !=
          record.requested_platforms.end()) {
    throw std::invalid_argument("requested platforms must be distinct and in canonical order");
  }
  if (record.statuses.size() != record.requested_platforms.size()) {
    throw std::invalid_argument("exactly one status per requested platform is required");
  }
  std::map<Platform, std::size_t> per_platform;
  for (const auto& r : record.results) ++per_platform[r.profile.platform];
  for (Platform p : record.requested_platforms) {
    const auto it = record.statuses.find(p);
    if (it == record.statuses.end()) {
      throw std::invalid_argument("missing status for " + std::string(to_string(p)));
    }
    const std::size_t count = per_platform.count(p) ? per_platform[p] : 0;
    if (const auto* ok = std::get_if<StatusOk>(&it->second); ok && ok->count != count) {
      throw std::invalid_argument("ok count disagrees with results for " + std::string(to_string(p)));
    }
    if (std::holds_alternative<StatusError>(it->second) && count != 0) {
      throw std::invalid_argument("failed platform " + std::string(to_string(p)) + " has results");
    }
  }
  for (const auto& [p, count] : per_platform) {
    if (!record.statuses.count(p)) {
      throw std::invalid_argument("results from unrequested platform " + std::string(to_string(p)));
    }
  }
  if (!std::is_sorted(record.results.begin(), record.results.end(), rank_order_less)) {
    throw std::invalid_argument("results are not in rank order");
  }
}

namespace {

Json status_to_json(const PlatformStatus& status) {
  Json out = Json::object();
  if (const auto* ok = std::get_if<StatusOk>(&status)) {
    out["state"] = "ok";
    out["count"] = ok->count;
  } else {
    const auto& err = std::get<StatusError>(status);
    out["state"] = "error";
    out["kind"] = std::string(to_string(err.kind));
    out["detail"] = err.detail;
    if (err.retry_after_seconds) out["retry_after"] = *err.retry_after_seconds;
  }
  return out;
}

PlatformStatus status_from_json(const Json& json) {
  const std::string state = detail::require_string(json, "state");
  if (state == "ok") return StatusOk{static_cast<std::size_t>(detail::require_count(json, "count"))};
  if (state != "error") throw SchemaError("unknown status state '" + state + "'");
  const auto kind = parse_connector_error_kind(detail::require_string(json, "kind"));
  if (!kind) throw SchemaError("unknown error kind");
  StatusError err{*kind, detail::require_string(json, "detail"), std::nullopt};
  if (const auto it = json.find("retry_after"); it != json.end()) {
    if (!it->is_number()) throw SchemaError("retry_after must be a number");
    err.retry_after_seconds = it->get<double>();
  }
  return err;
}

}  // namespace

namespace detail {

Json record_to_json(const QueryRecord& record) {
  Json out = Json::object();
  out["id"] = record.id;
  out["query"] = record.query;
  Json platforms = Json::array();
  for (Platform p : record.requested_platforms) platforms.push_back(std::string(to_string(p)));
  out["requested_platforms"] = std::move(platforms);
  out["created_at"] = format_iso8601(record.created_at);
  Json statuses = Json::object();
  for (const auto& [p, status] : record.statuses) {
    statuses[std::string(to_string(p))] = status_to_json(status);
  }
  out["statuses"] = std::move(statuses);
  Json results = Json::array();
  for (const auto& r : record.results) {
    results.push_back(Json{{"profile", profile_to_json(r.profile)}, {"score", r.score.value()}});
  }
  out["results"] = std::move(results);
  return out;
}

QueryRecord record_from_json(const Json& json) {
  QueryRecord record;
  record.id = require_string(json, "id");
  record.query = require_string(json, "query");
  const Json& platforms = require_member(json, "requested_platforms");
  if (!platforms.is_array()) throw SchemaError("requested_platforms must be an array");
  for (const auto& name : platforms) {
    const auto p = name.is_string() ? parse_platform(name.get<std::string>()) : std::nullopt;
    if (!p) throw SchemaError("unknown platform in requested_platforms");
    record.requested_platforms.push_back(*p);
  }
  try {
    record.created_at = parse_iso8601(require_string(json, "created_at"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  const Json& statuses = require_member(json, "statuses");
  if (!statuses.is_object()) throw SchemaError("statuses must be an object");
  for (const auto& [name, status] : statuses.items()) {
    const auto p = parse_platform(name);
    if (!p) throw SchemaError("unknown platform in statuses");
    record.statuses.emplace(*p, status_from_json(status));
  }
  const Json& results = require_member(json, "results");
  if (!results.is_array()) throw SchemaError("results must be an array");
  for (const auto& r : results) {
    const Json& score = require_member(r, "score");
    if (!score.is_number()) throw SchemaError("score must be a number");
    try {
      record.results.push_back({profile_from_json(require_member(r, "profile")),
                                MatchScore{score.get<double>()}});
    } catch (const std::out_of_range& e) {
      throw SchemaError(e.what());
    }
  }
  return record;
}

}  // namespace detail

std::string serialize_record(const QueryRecord& record) {
  return detail::dump(detail::record_to_json(record));
}

QueryRecord parse_record(std::string_view json) {
  try {
    return detail::record_from_json(Json::parse(json));
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

QuerySummary summarize(const QueryRecord& record) {
  QuerySummary summary{record.id, record.query, record.created_at, {}};
  for (Platform p : record.requested_platforms) summary.counts[p] = 0;
  for (const auto& r : record.results) ++summary.counts[r.profile.platform];
  return summary;
}

std::optional<std::string> QueryStore::export_query(std::string_view id, ExportFormat format) const {
  auto record = get_query(id);
  if (!record) return std::nullopt;
  return render_export(*record, format);
}

MemoryQueryStore::MemoryQueryStore(WallClock clock) : clock_(std::move(clock)) {}

std::string MemoryQueryStore::persist_query(QueryRecord record) {
  check_record_invariants(record);
  std::unique_lock lock(mutex_);
  const auto now = clock_();
  record.id = ids_.next(now);
  record.created_at = std::chrono::time_point_cast<std::chrono::seconds>(now);
  append_durably(record);
  index_.emplace(record.id, records_.size());
  records_.push_back(std::make_shared<const QueryRecord>(std::move(record)));
  return records_.back()->id;
}

std::optional<QueryRecord> MemoryQueryStore::get_query(std::string_view id) const {
  if (!is_record_id(id)) return std::nullopt;
  std::shared_lock lock(mutex_);
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return *records_[it->second];
}

QueryPage MemoryQueryStore::list_queries(std::size_t offset, std::size_t page_size) const {
  if (page_size < 1 || page_size > kMaxPageSize) {
    throw std::invalid_argument("page_size must be within [1, 500]");
  }
  std::shared_lock lock(mutex_);
  QueryPage page;
  page.total = records_.size();
  for (std::size_t i = offset; i < records_.size() && page.page.size() < page_size; ++i) {
    page.page.push_back(summarize(*records_[records_.size() - 1 - i]));
  }
  return page;
}

void MemoryQueryStore::append_durably(const QueryRecord&) {}

void MemoryQueryStore::load_existing(std::vector<QueryRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const QueryRecord& a, const QueryRecord& b) { return a.id < b.id; });
  std::unique_lock lock(mutex_);
  for (auto& record : records) {
    if (index_.count(record.id)) throw StorageError("duplicate record id " + record.id);
    ids_.observe(record.id);
    index_.emplace(record.id, records_.size());
    records_.push_back(std::make_shared<const QueryRecord>(std::move(record)));
  }
}

FileQueryStore::FileQueryStore(std::filesystem::path path, WallClock clock)
    : MemoryQueryStore(std::move(clock)), path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw StorageError("cannot read store file " + path_.string());
  std::vector<QueryRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      QueryRecord record = parse_record(line);
      if (!is_record_id(record.id)) throw SchemaError("malformed id");
      records.push_back(std::move(record));
    } catch (const SchemaError& e) {
      throw StorageError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) throw StorageError("error reading store file " + path_.string());
  load_existing(std::move(records));
}

FileQueryStore::~FileQueryStore() {
  if (out_) std::fclose(out_);
}

void FileQueryStore::append_durably(const QueryRecord& record) {
  if (!out_) {
    out_ = std::fopen(path_.c_str(), "ab");
    if (!out_) {
      throw StorageError("cannot open store file " + path_.string() + ": " + std::strerror(errno));
    }
  }
  const std::string line = serialize_record(record) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), out_) != line.size() || std::fflush(out_) != 0 ||
      ::fsync(::fileno(out_)) != 0) {
    throw StorageError("cannot append to store file " + path_.string() + ": " +
                       std::strerror(errno));
  }
}

std::unique_ptr<QueryStore> open_store(const StoreSettings& settings) {
  if (settings.backend == "file") return std::make_unique<FileQueryStore>(settings.path);
  if (settings.backend == "memory") return std::make_unique<MemoryQueryStore>();
  throw StorageError("unsupported store backend '" + settings.backend + "'");
}

}  // namespace sociohub
