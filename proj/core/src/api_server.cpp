#include <charconv>
#include <cmath>
#include <sstream>

#include "http_runner.hpp"
#include "json_codec.hpp"
#include "sociohub/service.hpp"

namespace sociohub {

using detail::Json;

namespace {

class BadRequest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(detail::dump(body), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view error, std::string_view detail) {
  send_json(res, status, Json{{"error", error}, {"detail", detail}});
}

template <typename T>
T parse_number(const std::string& text, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw BadRequest(std::string("invalid ") + name + " '" + text + "'");
  }
  return value;
}

std::vector<Platform> parse_platform_list(const std::string& text) {
  std::vector<Platform> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto p = parse_platform(item);
    if (!p) throw BadRequest("unknown platform '" + item + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw BadRequest("platforms must name at least one platform");
  return out;
}

Json summary_to_json(const QuerySummary& summary) {
  Json counts = Json::object();
  for (const auto& [p, n] : summary.counts) counts[std::string(to_string(p))] = n;
  return Json{{"id", summary.id},
              {"query", summary.query},
              {"created_at", format_iso8601(summary.created_at)},
              {"counts", std::move(counts)}};
}

}  // namespace

struct ApiServer::Impl {
  Impl(AggregationService& s, QueryStore& st) : service(s), store(st) {}

  // Maps the request-level exception taxonomy onto status codes.
  template <typename Handler>
  void guarded(httplib::Response& res, Handler&& handler) {
    try {
      handler();
    } catch (const InvalidQuery& e) {
      send_error(res, 400, "InvalidQuery", e.what());
    } catch (const BadRequest& e) {
      send_error(res, 400, "InvalidRequest", e.what());
    } catch (const StorageError& e) {
      send_error(res, 500, "StorageError", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  }

  void search(const httplib::Request& req, httplib::Response& res) {
    SearchRequest request;
    request.query = req.get_param_value("q");
    if (req.has_param("platforms")) request.platforms = parse_platform_list(req.get_param_value("platforms"));
    if (req.has_param("limit")) request.limit = parse_number<int>(req.get_param_value("limit"), "limit");
    if (req.has_param("threshold")) {
      request.threshold = parse_number<double>(req.get_param_value("threshold"), "threshold");
    }
    send_json(res, 200, detail::result_to_json(service.aggregate_search(request)));
  }

  void history(const httplib::Request& req, httplib::Response& res) {
    std::size_t offset = 0;
    std::size_t page_size = 50;
    if (req.has_param("offset")) offset = parse_number<std::size_t>(req.get_param_value("offset"), "offset");
    if (req.has_param("page_size")) {
      page_size = parse_number<std::size_t>(req.get_param_value("page_size"), "page_size");
    }
    if (page_size < 1 || page_size > kMaxPageSize) throw BadRequest("page_size must be within [1, 500]");
    const QueryPage page = store.list_queries(offset, page_size);
    Json queries = Json::array();
    for (const auto& s : page.page) queries.push_back(summary_to_json(s));
    send_json(res, 200,
              Json{{"total", page.total}, {"offset", offset}, {"page_size", page_size},
                   {"queries", std::move(queries)}});
  }

  void record(const std::string& id, httplib::Response& res) {
    const auto record = store.get_query(id);
    if (!record) return send_error(res, 404, "NotFound", "no query with id '" + id + "'");
    send_json(res, 200, detail::record_to_json(*record));
  }

  void export_record(const std::string& id, const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.has_param("format") ? req.get_param_value("format") : "jsonlines";
    const auto format = parse_export_format(name);
    if (!format) throw BadRequest("format must be jsonlines or csv");
    const auto body = store.export_query(id, *format);
    if (!body) return send_error(res, 404, "NotFound", "no query with id '" + id + "'");
    res.status = 200;
    res.set_header("Content-Disposition", "attachment; filename=\"sociohub-" + id + "." +
                                              std::string(file_extension(*format)) + "\"");
    res.set_content(*body, std::string(media_type(*format)));
  }

  AggregationService& service;
  QueryStore& store;
  detail::BackgroundServer http;
};

ApiServer::ApiServer(AggregationService& service, QueryStore& store,
                     std::optional<std::string> static_dir)
    : impl_(std::make_unique<Impl>(service, store)) {
  auto& server = impl_->http.server();
  Impl* impl = impl_.get();

  server.Get("/api/health", [impl](const httplib::Request&, httplib::Response& res) {
    Json platforms = Json::array();
    for (Platform p : impl->service.configured_platforms()) platforms.push_back(std::string(to_string(p)));
    send_json(res, 200, Json{{"status", "ok"}, {"platforms_configured", std::move(platforms)}});
  });
  server.Get("/api/search", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->search(req, res); });
  });
  server.Get("/api/queries", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->history(req, res); });
  });
  server.Get(R"(/api/queries/([^/]+))", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->record(req.matches[1], res); });
  });
  server.Get(R"(/api/export/([^/]+))", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->guarded(res, [&] { impl->export_record(req.matches[1], req, res); });
  });
  if (static_dir && !server.set_mount_point("/", *static_dir)) {
    throw std::invalid_argument("static directory does not exist: " + *static_dir);
  }
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::start(const std::string& host, int port) { impl_->http.start(host, port); }

void ApiServer::stop() { impl_->http.stop(); }

int ApiServer::port() const noexcept { return impl_->http.port(); }

}  // namespace sociohub
