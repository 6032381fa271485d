#include "ndntb/emu/benchmark.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "ndntb/ndn/forwarder.hpp"
#include "ndntb/topo/routing.hpp"
#include "ndntb/topo/topology.hpp"

namespace ndntb::emu {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

topo::Topology ring(std::size_t n) {
  std::vector<std::optional<topo::LinkSpec>> m(n * n);
  topo::LinkSpec s;
  s.delay_ms = 1.0;
  for (std::size_t i = 0; n > 1 && i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    m[i * n + j] = s;
    m[j * n + i] = s;
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(fmt::format("N{}", i));
  return topo::Topology::build(std::move(labels), std::move(m));
}

}  // namespace

BenchmarkReport benchmark_prefix_install(std::size_t node_count, std::size_t prefixes_per_node) {
  if (node_count < 1 || prefixes_per_node < 1) throw std::invalid_argument("counts must be >= 1");
  BenchmarkReport rep;
  rep.node_count = node_count;
  rep.prefixes_per_node = prefixes_per_node;
  const auto start = Clock::now();

  auto t0 = Clock::now();
  const topo::Topology topology = ring(node_count);
  std::vector<ndn::Forwarder> nodes;
  nodes.reserve(node_count);
  std::vector<std::unordered_map<std::size_t, ndn::FaceId>> face_of(node_count);
  for (const topo::NodeId& n : topology.nodes()) {
    nodes.emplace_back(n);
    for (std::size_t v : topology.neighbors(n.index)) {
      face_of[n.index][v] = nodes.back().add_face(topology.node(v).label, ndn::FaceKind::ethernet);
    }
  }
  rep.link_config_ms = ms_since(t0);

  t0 = Clock::now();
  const auto configs = topo::compile_node_configs(topology);
  rep.routing_ms = ms_since(t0);

  t0 = Clock::now();
  std::unordered_map<std::string, std::vector<ndn::Name>> owned;
  for (std::size_t i = 0; i < node_count; ++i) {
    const ndn::Name main = ndn::Name::parse(topo::name_prefix_for(i));
    auto& names = owned[main.uri()];
    names.reserve(prefixes_per_node);
    for (std::size_t k = 0; k < prefixes_per_node; ++k) names.push_back(main.append(fmt::format("prefix{}", k)));
  }
  rep.generate_ms = ms_since(t0);

  t0 = Clock::now();
  for (const topo::NodeConfig& cfg : configs) {
    ndn::Forwarder& fwd = nodes[cfg.node.index];
    for (const topo::RouteEntry& route : cfg.ndn_routes) {
      const ndn::FaceId face = face_of[cfg.node.index].at(route.next_hop.index);
      for (const ndn::Name& name : owned.at(route.destination)) fwd.add_route(name, face, route.cost);
    }
  }
  rep.install_ms = ms_since(t0);

  for (const auto& f : nodes) rep.fib_sizes.push_back(f.fib().size());
  rep.total_ms = ms_since(start);
  return rep;
}

}  // namespace ndntb::emu
