// sociohub command-line front end: simulator, API server, one-shot search,
// export and configuration checks.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sociohub/config.hpp"
#include "sociohub/service.hpp"
#include "sociohub/simulator.hpp"

namespace {

using namespace sociohub;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Blocks SIGINT/SIGTERM in every thread started afterwards so that
// wait_for_shutdown can collect them synchronously.
sigset_t block_shutdown_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void wait_for_shutdown(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

ConfigMap read_config(const std::string& path, bool required) {
  ConfigMap config;
  std::ifstream probe(path);
  if (probe || required) config = load_config_file(path);
  apply_env_overrides(config);
  return config;
}

// Connector settings aimed at a local simulator serving `corpus`.
std::map<Platform, ConnectorConfig> simulator_connectors(const SimulatorServer& sim,
                                                         const FixtureCorpus& corpus) {
  std::map<Platform, ConnectorConfig> out;
  for (Platform p : kAllPlatforms) {
    ConnectorConfig c;
    c.platform = p;
    c.base_url = sim.base_url(p);
    if (p == Platform::twitter) c.credentials = corpus.twitter_credentials;
    if (p == Platform::instagram) c.credentials = corpus.instagram_credentials;
    if (p == Platform::mastodon) c.credentials = MastodonCredentials{corpus.mastodon_credentials.access_token, c.base_url};
    out.emplace(p, std::move(c));
  }
  return out;
}

// Everything a search needs; optionally backed by an in-process simulator.
struct Runtime {
  AppConfig app;
  std::unique_ptr<SimulatorServer> sim;
  std::unique_ptr<QueryStore> store;
  std::unique_ptr<AggregationService> service;

  Runtime(const std::string& config_path, bool config_required, const std::string& fixtures,
          const std::string& store_path) {
    app = build_app_config(read_config(config_path, config_required));
    if (!store_path.empty()) app.store.path = store_path;
    if (!fixtures.empty()) {
      auto corpus = load_fixtures(fixtures);
      sim = std::make_unique<SimulatorServer>(corpus);
      sim->start();
      app.connectors = simulator_connectors(*sim, corpus);
    }
    if (app.connectors.empty()) {
      throw ConfigError("no platform is configured; pass --config or --simulate");
    }
    store = open_store(app.store);
    auto limiter = std::make_shared<RateLimiter>(app.rate_limits);
    std::vector<std::shared_ptr<Connector>> connectors;
    for (const auto& [p, c] : app.connectors) connectors.push_back(make_connector(c, limiter));
    service = std::make_unique<AggregationService>(std::move(connectors), *store);
  }
};

std::vector<Platform> parse_platforms(const std::vector<std::string>& names) {
  std::vector<Platform> out;
  for (const auto& name : names) {
    const auto p = parse_platform(name);
    if (!p) throw InvalidQuery("unknown platform '" + name + "'");
    out.push_back(*p);
  }
  return out;
}

void print_table(const CrossPlatformResult& result, std::ostream& out) {
  const auto& record = result.record;
  out << "query " << record.id << " \"" << record.query << "\"\n";
  for (const auto& [p, status] : record.statuses) {
    out << "  " << std::left << std::setw(10) << to_string(p);
    if (const auto* ok = std::get_if<StatusOk>(&status)) {
      out << "ok (" << ok->count << ")\n";
    } else {
      const auto& err = std::get<StatusError>(status);
      out << to_string(err.kind) << ": " << err.detail;
      if (err.retry_after_seconds) out << " (retry after " << *err.retry_after_seconds << " s)";
      out << "\n";
    }
  }
  out << "\n"
      << std::left << std::setw(5) << "#" << std::setw(11) << "platform" << std::setw(24) << "handle"
      << std::setw(28) << "display name" << std::right << std::setw(10) << "followers"
      << std::setw(8) << "score" << "\n";
  std::size_t rank = 0;
  for (const auto& r : record.results) {
    const auto& u = r.profile;
    out << std::left << std::setw(5) << ++rank << std::setw(11) << to_string(u.platform)
        << std::setw(24) << u.handle << std::setw(28) << u.display_name << std::right
        << std::setw(10) << u.followers << std::setw(8) << std::fixed << std::setprecision(3)
        << r.score.value() << "\n";
  }
  if (record.results.empty()) out << "(no matches)\n";
}

int run_simulate(const std::string& fixtures, const std::string& host, int port, int latency_ms) {
  auto corpus = load_fixtures(fixtures);
  if (latency_ms > 0) {
    for (Platform p : kAllPlatforms) corpus.faults[p].latency_ms = latency_ms;
  }
  const auto signals = block_shutdown_signals();
  SimulatorServer sim(std::move(corpus));
  sim.start(host, port);
  std::cout << "simulator listening on http://" << host << ":" << sim.port() << std::endl;
  for (Platform p : kAllPlatforms) std::cout << "  " << sim.base_url(p) << std::endl;
  wait_for_shutdown(signals);
  sim.stop();
  return 0;
}

int run_serve(const std::string& config_path, const std::string& host, int port,
              const std::string& fixtures, const std::string& store_path) {
  const auto signals = block_shutdown_signals();
  Runtime rt(config_path, true, fixtures, store_path);
  ApiServer api(*rt.service, *rt.store, rt.app.ui_dir);
  api.start(host, port);
  std::cout << "serving on http://" << host << ":" << api.port() << std::endl;
  wait_for_shutdown(signals);
  api.stop();
  return 0;
}

int run_search(const std::string& query, const std::vector<std::string>& platforms, int limit,
               double threshold, const std::string& format, const std::string& config_path,
               const std::string& fixtures, const std::string& store_path) {
  Runtime rt(config_path, false, fixtures, store_path);
  SearchRequest request;
  request.query = query;
  request.platforms = platforms.empty() ? rt.service->configured_platforms() : parse_platforms(platforms);
  request.limit = limit;
  request.threshold = threshold;
  const auto result = rt.service->aggregate_search(request);
  if (format == "jsonlines") {
    std::cout << render_export(result.record, ExportFormat::jsonlines);
  } else {
    print_table(result, std::cout);
  }
  return 0;
}

int run_export(const std::string& id, const std::string& format_name, const std::string& out_path,
               const std::string& config_path, const std::string& store_path) {
  auto app = build_app_config(read_config(config_path, false));
  if (!store_path.empty()) app.store.path = store_path;
  const auto store = open_store(app.store);
  const auto format = parse_export_format(format_name);
  if (!format) throw InvalidQuery("format must be csv or jsonlines");
  const auto body = store->export_query(id, *format);
  if (!body) {
    std::cerr << "no query with id '" << id << "'\n";
    return kExitFailure;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << *body;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << *body;
  out.close();
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return kExitFailure;
  }
  return 0;
}

int run_config_check(const std::string& config_path) {
  const auto report = check_config(read_config(config_path, true));
  bool any_ok = false;
  bool all_configured_ok = true;
  for (const auto& platform : report) {
    const bool ok = platform.configured && platform.ok();
    std::cout << to_string(platform.platform) << ": "
              << (!platform.configured ? "not configured" : ok ? "ok" : "incomplete") << "\n";
    if (platform.configured) {
      for (const auto& f : platform.fields) {
        std::cout << "  " << std::left << std::setw(32) << f.key << (f.ok ? "ok" : f.problem) << "\n";
      }
    }
    any_ok = any_ok || ok;
    if (platform.configured && !ok) all_configured_ok = false;
  }
  return any_ok && all_configured_ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-platform social profile search"};
  app.require_subcommand(1);

  std::string fixtures, config_path = "sociohub.conf", host = "127.0.0.1", store_path;
  int port = 8089;
  int latency_ms = 0;

  auto* simulate = app.add_subcommand("simulate", "Serve the three platform dialects from fixtures");
  simulate->add_option("--fixtures", fixtures, "Fixture corpus (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--port", port, "Port, 0 for any free port")->capture_default_str();
  simulate->add_option("--host", host, "Bind address")->capture_default_str();
  simulate->add_option("--latency-ms", latency_ms, "Delay added to every search response")
      ->check(CLI::NonNegativeNumber);

  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API (and web console, if ui.dir is set)");
  serve->add_option("--config", config_path, "Configuration file")->capture_default_str();
  serve->add_option("--port", serve_port, "Port, 0 for any free port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--simulate", fixtures, "Use an in-process simulator with these fixtures")
      ->check(CLI::ExistingFile);
  serve->add_option("--store", store_path, "Query store file (overrides store.path)");

  std::string query, format = "table";
  std::vector<std::string> platforms;
  int limit = static_cast<int>(kDefaultLimit);
  double threshold = kDefaultThreshold;
  auto* search = app.add_subcommand("search", "Run one query and print the ranked results");
  search->add_option("query", query, "Username to look for")->required();
  search->add_option("--platforms", platforms, "Subset of twitter,instagram,mastodon")->delimiter(',');
  search->add_option("--limit", limit, "Results per platform (1-50)")->capture_default_str();
  search->add_option("--threshold", threshold, "Minimum match score (0-1)")->capture_default_str();
  search->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"table", "jsonlines"}))
      ->capture_default_str();
  search->add_option("--config", config_path, "Configuration file")->capture_default_str();
  search->add_option("--simulate", fixtures, "Use an in-process simulator with these fixtures")
      ->check(CLI::ExistingFile);
  search->add_option("--store", store_path, "Query store file (overrides store.path)");

  std::string id, export_format = "csv", out_path;
  auto* export_cmd = app.add_subcommand("export", "Write a stored query's results");
  export_cmd->add_option("id", id, "Query id")->required();
  export_cmd->add_option("--format", export_format, "csv or jsonlines")
      ->check(CLI::IsMember({"csv", "jsonlines"}))
      ->capture_default_str();
  export_cmd->add_option("--out", out_path, "Output file, - for stdout");
  export_cmd->add_option("--config", config_path, "Configuration file")->capture_default_str();
  export_cmd->add_option("--store", store_path, "Query store file (overrides store.path)");

  auto* config_cmd = app.add_subcommand("config", "Configuration utilities");
  config_cmd->require_subcommand(1);
  auto* check = config_cmd->add_subcommand("check", "Report missing or invalid credential fields");
  check->add_option("--config", config_path, "Configuration file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(fixtures, host, port, latency_ms);
    if (*serve) return run_serve(config_path, host, serve_port, fixtures, store_path);
    if (*search) {
      return run_search(query, platforms, limit, threshold, format, config_path, fixtures, store_path);
    }
    if (*export_cmd) return run_export(id, export_format, out_path, config_path, store_path);
    if (*check) return run_config_check(config_path);
  } catch (const InvalidQuery& e) {
    std::cerr << "invalid query: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
