#include "ndntb/api/http_server.hpp"

#include <charconv>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace ndntb::api {

using nlohmann::ordered_json;

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view kind, const std::string& message) {
  send_json(res, status, {{"error", std::string(kind)}, {"message", message}});
}

ordered_json routes_json(const std::vector<topo::RouteEntry>& routes) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : routes) {
    arr.push_back({{"destination", r.destination}, {"next_hop", r.next_hop.label}, {"cost", r.cost}});
  }
  return arr;
}

ordered_json configs_json(const std::vector<topo::NodeConfig>& configs) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : configs) {
    ordered_json faces = ordered_json::array();
    for (const auto& f : c.faces) faces.push_back({{"neighbor", f.neighbor.label}, {"kind", std::string(to_string(f.kind))}});
    arr.push_back({{"node", c.node.label},
                   {"index", c.node.index},
                   {"address", c.address},
                   {"name_prefix", c.name_prefix},
                   {"faces", faces},
                   {"ip_routes", routes_json(c.ip_routes)},
                   {"ndn_routes", routes_json(c.ndn_routes)}});
  }
  return arr;
}

ordered_json handle_json(const ExperimentHandle& h) {
  ordered_json j;
  j["id"] = h.id;
  j["state"] = std::string(to_string(h.state));
  j["created_at"] = format_rfc3339(h.created_at);
  j["topology_id"] = h.topology_id ? ordered_json(*h.topology_id) : ordered_json(nullptr);
  j["consumer"] = h.spec.topology.node(h.spec.consumer).label;
  j["producer"] = h.spec.topology.node(h.spec.producer).label;
  j["strategy"] = std::string(ndn::to_string(h.spec.strategy));
  j["repetitions"] = h.spec.repetitions;
  j["completed"] = h.completed;
  if (!h.error.empty()) j["error"] = h.error;
  return j;
}

ordered_json batch_json(const DelayBatch& b) {
  ordered_json links = ordered_json::array();
  for (const auto& s : b.samples) {
    links.push_back({{"link", s.link}, {"ms", s.ms ? ordered_json(*s.ms) : ordered_json(nullptr)}, {"loss", !s.ms}});
  }
  return {{"source", b.source}, {"round", b.round}, {"links", links}};
}

std::optional<long long> int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) throw std::invalid_argument(fmt::format("bad {}", name));
  return out;
}

}  // namespace

HttpServer::HttpServer(Controller& controller) : controller_(controller), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

std::uint16_t HttpServer::bind(const std::string& host, std::uint16_t port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p <= 0) throw std::runtime_error(fmt::format("cannot bind {}", host));
    return static_cast<std::uint16_t>(p);
  }
  if (!server_->bind_to_port(host, port)) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { serve(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  controller_.probes().close();
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void HttpServer::routes() {
  auto& s = *server_;
  Controller& c = controller_;

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    } catch (...) {
      send_error(res, 500, "internal", "unknown error");
    }
  });

  s.Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"status", "ok"}}); });

  s.Post("/topology", [&c](const httplib::Request& req, httplib::Response& res) {
    if (req.body.empty()) return send_error(res, 400, "empty_body", "request body is empty");
    try {
      const std::string id = c.add_topology(req.body);
      const topo::Topology t = c.topology(id);
      send_json(res, 200, {{"id", id},
                           {"nodes", t.node_count()},
                           {"links", t.links().size()},
                           {"connected", t.connected()}});
    } catch (const topo::TopologyError& e) {
      send_error(res, 422, to_string(e.kind()), e.what());
    }
  });

  s.Get(R"(/topology/([^/]+))", [&c](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(topo::serialize_adjacency(c.topology(req.matches[1])), "application/json");
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    }
  });

  s.Get(R"(/topology/([^/]+)/configs)", [&c](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, 200, {{"id", req.matches[1].str()}, {"configs", configs_json(c.configs(req.matches[1]))}});
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    }
  });

  s.Post("/experiments", [&c](const httplib::Request& req, httplib::Response& res) {
    if (req.body.empty()) return send_error(res, 400, "empty_body", "request body is empty");
    try {
      send_json(res, 202, handle_json(c.submit_experiment(req.body)));
    } catch (const emu::ExperimentError& e) {
      const int status = e.kind() == emu::ExperimentErrc::unknown_topology ? 404
                         : e.kind() == emu::ExperimentErrc::malformed     ? 400
                                                                           : 422;
      send_error(res, status, to_string(e.kind()), e.what());
    }
  });

  s.Get("/experiments", [&c](const httplib::Request&, httplib::Response& res) {
    ordered_json arr = ordered_json::array();
    for (const auto& h : c.experiments()) arr.push_back(handle_json(h));
    send_json(res, 200, {{"experiments", arr}});
  });

  s.Get(R"(/experiments/([^/]+))", [&c](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, 200, handle_json(c.experiment(req.matches[1])));
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    }
  });

  auto metrics = [&c](bool csv) {
    return [&c, csv](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto m = c.metrics(req.matches[1]);
        if (!m) {
          return send_error(res, 409, to_string(c.experiment(req.matches[1]).state), "experiment has not finished");
        }
        if (csv) {
          res.set_content(eval::export_runs_csv(*m), "text/csv");
        } else {
          res.set_content(eval::summaries_to_json(*m), "application/json");
        }
      } catch (const NotFound& e) {
        send_error(res, 404, "not_found", e.what());
      }
    };
  };
  s.Get(R"(/experiments/([^/]+)/metrics)", metrics(false));
  s.Get(R"(/experiments/([^/]+)/metrics\.csv)", metrics(true));

  s.Get("/links/delays", [&c](const httplib::Request& req, httplib::Response& res) {
    std::optional<long long> rounds;
    try {
      rounds = int_param(req, "rounds");
    } catch (const std::invalid_argument& e) {
      return send_error(res, 400, "bad_param", e.what());
    }
    res.set_header("Cache-Control", "no-cache");
    if (!c.probes().active()) {
      res.set_content("", "text/event-stream");
      return;
    }
    struct Cursor {
      std::uint64_t after;
      long long left;
    };
    auto cur = std::make_shared<Cursor>(Cursor{c.probes().head(), rounds.value_or(-1)});
    res.set_chunked_content_provider("text/event-stream", [&c, cur](std::size_t, httplib::DataSink& sink) {
      while (cur->left != 0) {
        if (!sink.is_writable()) return false;
        auto batch = c.probes().next(cur->after, std::chrono::milliseconds(250));
        if (!batch) {
          if (!c.probes().active()) break;
          continue;
        }
        cur->after = batch->seq;
        if (cur->left > 0) --cur->left;
        const std::string event = fmt::format("event: delays\nid: {}\ndata: {}\n\n", batch->seq, batch_json(*batch).dump());
        if (!sink.write(event.data(), event.size())) return false;
      }
      sink.done();
      return true;
    });
  });

  s.Post(R"(/links/([^/]+)/([^/]+)/state)", [&c](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("up") || !body.at("up").is_boolean()) {
      return send_error(res, 400, "malformed", "body must be {\"up\": true|false}");
    }
    const bool up = body.at("up").get<bool>();
    try {
      c.set_link_state(req.matches[1], req.matches[2], up);
      send_json(res, 200, {{"link", fmt::format("{}-{}", req.matches[1].str(), req.matches[2].str())}, {"up", up}});
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    }
  });

  s.Get("/leases", [&c](const httplib::Request&, httplib::Response& res) {
    ordered_json arr = ordered_json::array();
    for (const auto& l : c.leases().leases()) arr.push_back(ordered_json::parse(discovery::lease_to_json(l)));
    send_json(res, 200, {{"leases", arr}});
  });

  s.Get(R"(/leases/([^/]+)/plan)", [&c](const httplib::Request& req, httplib::Response& res) {
    const auto mac = discovery::parse_mac(req.matches[1].str());
    if (!mac) return send_error(res, 400, "bad_mac", "expected aa:bb:cc:dd:ee:ff");
    try {
      res.set_content(discovery::plan_to_json(c.plan_for(*mac)), "application/json");
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what());
    }
  });

  s.Get("/logs", [&c](const httplib::Request& req, httplib::Response& res) {
    logrepo::LogQuery q;
    try {
      if (req.has_param("source")) q.source = req.get_param_value("source");
      if (req.has_param("app")) q.app = req.get_param_value("app");
      if (auto sev = int_param(req, "max_severity")) q.severity = logrepo::SeverityFilter{static_cast<int>(*sev)};
      if (req.has_param("t0") || req.has_param("t1")) {
        const auto t0 = parse_rfc3339(req.get_param_value("t0"));
        const auto t1 = parse_rfc3339(req.get_param_value("t1"));
        if (!t0 || !t1) return send_error(res, 400, "bad_param", "t0 and t1 must both be RFC 3339 instants");
        q.range = std::make_pair(*t0, *t1);
      }
      ordered_json arr = ordered_json::array();
      for (const auto& rec : c.logs().query(q)) {
        arr.push_back({{"received_at", format_rfc3339(rec.received_at)},
                       {"source", rec.source_addr},
                       {"line", logrepo::format_syslog(rec)}});
      }
      send_json(res, 200, {{"records", arr}});
    } catch (const logrepo::InvalidQuery& e) {
      send_error(res, 400, "inverted_range", e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, "bad_param", e.what());
    }
  });
}

std::string configs_to_json(const std::vector<topo::NodeConfig>& configs) { return configs_json(configs).dump(2); }

}  // namespace ndntb::api
