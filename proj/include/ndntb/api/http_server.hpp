#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "ndntb/api/controller.hpp"

namespace httplib {
class Server;
}

namespace ndntb::api {

/// HTTP+JSON surface over a Controller:
///   POST /topology                    adjacency doc -> {"id", ...}
///   GET  /topology/{id}               canonical adjacency doc
///   GET  /topology/{id}/configs       per-node configs
///   POST /experiments                 spec -> handle (202)
///   GET  /experiments, /experiments/{id}
///   GET  /experiments/{id}/metrics    summaries (409 until done)
///   GET  /experiments/{id}/metrics.csv
///   GET  /links/delays[?rounds=N]     text/event-stream, one event per probe round
///   POST /links/{a}/{b}/state         {"up": bool}
///   GET  /leases, /leases/{mac}/plan
///   GET  /logs?source=&max_severity=&app=&t0=&t1=
///   GET  /health
/// Node configs as a pretty-printed JSON array (same shape as the configs endpoint).
std::string configs_to_json(const std::vector<topo::NodeConfig>& configs);

class HttpServer {
 public:
  explicit HttpServer(Controller& controller);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  std::uint16_t bind(const std::string& host, std::uint16_t port);
  /// Serves on the calling thread until stop().
  void serve();
  /// Serves on a background thread.
  void start();
  void stop();

 private:
  void routes();

  Controller& controller_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace ndntb::api
