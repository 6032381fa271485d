#include "ndntb/topo/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include <fmt/format.h>

namespace ndntb::topo {

std::string_view to_string(FaceKind kind) {
  switch (kind) {
    case FaceKind::ethernet: return "ethernet";
    case FaceKind::tcp: return "tcp";
    case FaceKind::udp: return "udp";
    case FaceKind::websocket: return "websocket";
    case FaceKind::app: return "app";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (cost, path) ordering: cheaper first, then lexicographically smaller path.
bool better(double cost, const std::vector<std::size_t>& path, double best_cost,
            const std::vector<std::size_t>& best_path) {
  if (cost != best_cost) return cost < best_cost;
  return std::lexicographical_compare(path.begin(), path.end(), best_path.begin(), best_path.end());
}

}  // namespace

std::vector<PathInfo> shortest_paths(const Topology& topo, std::size_t source) {
  const std::size_t n = topo.node_count();
  if (source >= n) {
    throw TopologyError(TopoErrc::unknown_node, fmt::format("source index {} not in topology", source));
  }

  std::vector<double> dist(n, kInf);
  std::vector<std::vector<std::size_t>> path(n);
  std::vector<bool> done(n, false);
  dist[source] = 0.0;
  path[source] = {source};

  // Labels only improve, so a node is final the first time it is popped with
  // its current (dist, path). Strictly positive weights guarantee every
  // equal-cost predecessor is final before that.
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d != dist[u]) continue;
    done[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      const auto& link = topo.link(u, v);
      if (!link || !link->up || done[v]) continue;
      const double nd = d + link->delay_ms;
      std::vector<std::size_t> np = path[u];
      np.push_back(v);
      if (dist[v] == kInf || better(nd, np, dist[v], path[v])) {
        const bool cost_changed = nd != dist[v];
        dist[v] = nd;
        path[v] = std::move(np);
        if (cost_changed) heap.push({nd, v});
      }
    }
  }

  std::vector<PathInfo> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == source || dist[v] == kInf) continue;
    out.push_back(PathInfo{v, dist[v], std::move(path[v])});
  }
  return out;
}

std::vector<RouteEntry> compute_routes(const Topology& topo, const NodeId& source) {
  if (source.index >= topo.node_count() || topo.node(source.index).label != source.label) {
    throw TopologyError(TopoErrc::unknown_node, fmt::format("source '{}' not in topology", source.label));
  }
  std::vector<RouteEntry> routes;
  for (const PathInfo& p : shortest_paths(topo, source.index)) {
    routes.push_back(RouteEntry{topo.node(p.destination).label, topo.node(p.path[1]), p.cost});
  }
  return routes;
}

std::string name_prefix_for(std::size_t index) { return fmt::format("/testbed/P{}", index); }

std::string address_for(std::size_t index) {
  const std::uint32_t base = (10u << 24) | 10u;  // 10.0.0.10
  const auto a = static_cast<std::uint32_t>(base + index);
  return fmt::format("{}.{}.{}.{}", a >> 24, (a >> 16) & 0xff, (a >> 8) & 0xff, a & 0xff);
}

std::vector<NodeConfig> compile_node_configs(const Topology& topo) {
  std::vector<NodeConfig> configs;
  configs.reserve(topo.node_count());
  for (const NodeId& node : topo.nodes()) {
    NodeConfig cfg;
    cfg.node = node;
    cfg.address = address_for(node.index);
    cfg.name_prefix = name_prefix_for(node.index);
    for (std::size_t nb : topo.neighbors(node.index)) {
      const FaceKind kind = topo.link(node.index, nb)->medium == Medium::wired ? FaceKind::ethernet : FaceKind::udp;
      cfg.faces.push_back(FaceConfig{topo.node(nb), kind});
    }
    for (const PathInfo& p : shortest_paths(topo, node.index)) {
      const NodeId& hop = topo.node(p.path[1]);
      cfg.ip_routes.push_back(RouteEntry{address_for(p.destination) + "/32", hop, p.cost});
      cfg.ndn_routes.push_back(RouteEntry{name_prefix_for(p.destination), hop, p.cost});
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

std::vector<std::vector<MultipathRoute>> compile_multipath(const Topology& topo) {
  const std::size_t n = topo.node_count();

  // all[s][d]: (cost, first hop) of the shortest path s -> d, if reachable.
  struct Best {
    double cost = kInf;
    std::size_t first_hop = 0;
  };
  std::vector<std::vector<Best>> all(n, std::vector<Best>(n));
  for (std::size_t s = 0; s < n; ++s) {
    all[s][s].cost = 0.0;
    all[s][s].first_hop = s;
    for (const PathInfo& p : shortest_paths(topo, s)) all[s][p.destination] = Best{p.cost, p.path[1]};
  }

  std::vector<std::vector<MultipathRoute>> out(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t d = 0; d < n; ++d) {
      if (d == u || all[u][d].cost == kInf) continue;
      MultipathRoute route{d, {}};
      for (std::size_t nb : topo.neighbors(u)) {
        const auto& link = topo.link(u, nb);
        if (!link->up || all[nb][d].cost == kInf) continue;
        if (nb != d && all[nb][d].first_hop == u) continue;
        route.next_hops.push_back(NextHop{nb, link->delay_ms + all[nb][d].cost});
      }
      std::stable_sort(route.next_hops.begin(), route.next_hops.end(),
                       [](const NextHop& x, const NextHop& y) { return x.cost < y.cost; });
      out[u].push_back(std::move(route));
    }
  }
  return out;
}

}  // namespace ndntb::topo
