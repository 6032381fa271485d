#include "ndntb/discovery/provisioning.hpp"

#include <nlohmann/json.hpp>

namespace ndntb::discovery {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::install_forwarder: return "install-forwarder";
    case TaskKind::configure_faces: return "configure-faces";
    case TaskKind::install_routes: return "install-routes";
    case TaskKind::set_log_sink: return "set-log-sink";
  }
  return "unknown";
}

ProvisioningPlan emit_provisioning_plan(const LeaseRecord& lease, const topo::NodeConfig& config,
                                        const std::string& log_sink) {
  ProvisioningPlan plan;
  plan.node = lease;
  plan.label = config.node.label;

  ProvisioningTask install;
  install.kind = TaskKind::install_forwarder;
  switch (lease.os_type) {
    case OsType::ubuntu:
    case OsType::pi: install.package_manager = "apt"; break;
    case OsType::mac: install.package_manager = "brew"; break;
    case OsType::unknown: plan.tags.push_back("manual-review"); break;
  }
  install.packages = {"nfd", "ndn-tools", "rsyslog"};
  plan.tasks.push_back(std::move(install));

  ProvisioningTask faces;
  faces.kind = TaskKind::configure_faces;
  faces.faces = config.faces;
  plan.tasks.push_back(std::move(faces));

  ProvisioningTask routes;
  routes.kind = TaskKind::install_routes;
  routes.ip_routes = config.ip_routes;
  routes.ndn_routes = config.ndn_routes;
  routes.name_prefix = config.name_prefix;
  plan.tasks.push_back(std::move(routes));

  ProvisioningTask sink;
  sink.kind = TaskKind::set_log_sink;
  sink.log_sink = log_sink;
  plan.tasks.push_back(std::move(sink));
  return plan;
}

namespace {

nlohmann::ordered_json routes_json(const std::vector<topo::RouteEntry>& routes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : routes) {
    arr.push_back({{"destination", r.destination}, {"next_hop", r.next_hop.label}, {"cost", r.cost}});
  }
  return arr;
}

}  // namespace

std::string plan_to_json(const ProvisioningPlan& plan) {
  nlohmann::ordered_json j;
  j["node"] = nlohmann::ordered_json::parse(lease_to_json(plan.node));
  j["label"] = plan.label;
  j["tags"] = plan.tags;
  auto tasks = nlohmann::ordered_json::array();
  for (const ProvisioningTask& t : plan.tasks) {
    nlohmann::ordered_json tj;
    tj["task"] = std::string(to_string(t.kind));
    switch (t.kind) {
      case TaskKind::install_forwarder:
        tj["package_manager"] = t.package_manager;
        tj["packages"] = t.packages;
        break;
      case TaskKind::configure_faces: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& f : t.faces) {
          arr.push_back({{"neighbor", f.neighbor.label}, {"kind", std::string(topo::to_string(f.kind))}});
        }
        tj["faces"] = arr;
        break;
      }
      case TaskKind::install_routes:
        tj["name_prefix"] = t.name_prefix;
        tj["ip_routes"] = routes_json(t.ip_routes);
        tj["ndn_routes"] = routes_json(t.ndn_routes);
        break;
      case TaskKind::set_log_sink: tj["log_sink"] = t.log_sink; break;
    }
    tasks.push_back(std::move(tj));
  }
  j["tasks"] = tasks;
  return j.dump(2);
}

}  // namespace ndntb::discovery
