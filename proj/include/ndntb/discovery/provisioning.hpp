#pragma once

#include <string>
#include <vector>

#include "ndntb/discovery/lease.hpp"
#include "ndntb/topo/routing.hpp"

namespace ndntb::discovery {

enum class TaskKind { install_forwarder, configure_faces, install_routes, set_log_sink };

std::string_view to_string(TaskKind kind);

struct ProvisioningTask {
  TaskKind kind = TaskKind::install_forwarder;
  /// install_forwarder: package manager for the node's OS ("apt", "brew", or
  /// empty when unknown).
  std::string package_manager;
  std::vector<std::string> packages;
  /// configure_faces
  std::vector<topo::FaceConfig> faces;
  /// install_routes
  std::vector<topo::RouteEntry> ip_routes;
  std::vector<topo::RouteEntry> ndn_routes;
  std::string name_prefix;
  /// set_log_sink: "host:port"
  std::string log_sink;
};

struct ProvisioningPlan {
  LeaseRecord node;
  std::string label;
  std::vector<ProvisioningTask> tasks;
  std::vector<std::string> tags;
};

/// Four tasks in fixed order: install-forwarder, configure-faces,
/// install-routes, set-log-sink. Unknown OS types are tagged
/// "manual-review".
ProvisioningPlan emit_provisioning_plan(const LeaseRecord& lease, const topo::NodeConfig& config,
                                        const std::string& log_sink = "10.0.0.1:514");

std::string plan_to_json(const ProvisioningPlan& plan);

}  // namespace ndntb::discovery
