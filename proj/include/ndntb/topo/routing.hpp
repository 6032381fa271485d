#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndntb/topo/topology.hpp"

namespace ndntb::topo {

struct RouteEntry {
  std::string destination;
  NodeId next_hop;
  double cost = 0.0;

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

enum class FaceKind { ethernet, tcp, udp, websocket, app };

std::string_view to_string(FaceKind kind);

struct FaceConfig {
  NodeId neighbor;
  FaceKind kind = FaceKind::ethernet;
};

struct NodeConfig {
  NodeId node;
  std::string address;  ///< dotted quad, without mask
  std::string name_prefix;
  std::vector<RouteEntry> ip_routes;
  std::vector<RouteEntry> ndn_routes;
  std::vector<FaceConfig> faces;
};

/// Shortest path from a source to one destination.
struct PathInfo {
  std::size_t destination = 0;
  double cost = 0.0;
  std::vector<std::size_t> path;  ///< source first, destination last
};

/// Dijkstra over up links, link delay as weight. Equal-cost paths are
/// resolved toward the lexicographically smallest node-index sequence,
/// which orders first by next-hop index. Unreachable nodes are omitted.
std::vector<PathInfo> shortest_paths(const Topology& topo, std::size_t source);

/// One route per reachable node other than `source`, in destination index
/// order. Destination is the node's label.
std::vector<RouteEntry> compute_routes(const Topology& topo, const NodeId& source);

/// Main NDN name prefix of node `index`: "/testbed/P<index>".
std::string name_prefix_for(std::size_t index);

/// Host address of node `index`: 10.0.0.10 + index.
std::string address_for(std::size_t index);

std::vector<NodeConfig> compile_node_configs(const Topology& topo);

/// Every usable next hop from `node` toward `destination`, cheapest first.
struct NextHop {
  std::size_t neighbor = 0;
  double cost = 0.0;
};

struct MultipathRoute {
  std::size_t destination = 0;
  std::vector<NextHop> next_hops;
};

/// Per node: for each reachable destination, the primary next hop plus every
/// neighbor whose own shortest path to the destination does not return
/// through this node. Cost of a next hop is link delay plus the neighbor's
/// distance. Indexed by node.
std::vector<std::vector<MultipathRoute>> compile_multipath(const Topology& topo);

}  // namespace ndntb::topo
