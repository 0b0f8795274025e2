#pragma once

// Runs an httplib::Server on a background thread.

#include <httplib.h>

#include <string>
#include <thread>

#include "sociohub/simulator.hpp"

namespace sociohub::detail {

class BackgroundServer {
 public:
  BackgroundServer() = default;
  BackgroundServer(const BackgroundServer&) = delete;
  BackgroundServer& operator=(const BackgroundServer&) = delete;
  ~BackgroundServer() { stop(); }

  httplib::Server& server() noexcept { return server_; }

  void start(const std::string& host, int port) {
    if (thread_.joinable()) throw BindError("server already running");
    // httplib's default also sets SO_REUSEPORT, which would let a second
    // server share a busy port.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ < 0) throw BindError("cannot bind " + host + " to any port");
    } else {
      if (!server_.bind_to_port(host, port)) {
        throw BindError("cannot bind " + host + ":" + std::to_string(port));
      }
      port_ = port;
    }
    host_ = host;
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const noexcept { return port_; }
  const std::string& host() const noexcept { return host_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  std::string host_;
  int port_ = -1;
};

}  // namespace sociohub::detail
