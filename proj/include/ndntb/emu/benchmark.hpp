#pragma once

#include <cstddef>
#include <vector>

namespace ndntb::emu {

struct BenchmarkReport {
  std::size_t node_count = 0;
  std::size_t prefixes_per_node = 0;
  // Wall time per phase, ms.
  double link_config_ms = 0;  ///< topology, forwarders and faces
  double routing_ms = 0;      ///< route compilation
  double generate_ms = 0;     ///< prefix name generation
  double install_ms = 0;      ///< FIB insertion on every node
  double total_ms = 0;
  /// Remote FIB entries per node; (node_count - 1) * prefixes_per_node on a
  /// connected topology.
  std::vector<std::size_t> fib_sizes;
};

/// Ring of `node_count` nodes (1 ms links). Each node owns
/// `prefixes_per_node` names "/testbed/P<i>/prefix<k>"; every node installs
/// a route for every other node's names toward its next hop.
BenchmarkReport benchmark_prefix_install(std::size_t node_count, std::size_t prefixes_per_node);

}  // namespace ndntb::emu
