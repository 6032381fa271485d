#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ndntb/topo/topology.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(NDNTB_TEST_DATA_DIR) + "/" + name; }

/// Reconstructed link-failure topology: C0-R1 1, R1-R2 20, R1-R3 5,
/// R2-R4 20, R3-R4 5, R4-P1 1 (ms). Only the R3-R4 link and node roles are
/// fixed by the original experiment; the remaining wiring is ours.
inline ndntb::topo::Topology diamond() { return ndntb::topo::parse_adjacency(read_file(data_path("diamond.json"))); }

inline ndntb::topo::Topology ring(std::size_t n, double delay_ms = 1.0) {
  std::vector<std::optional<ndntb::topo::LinkSpec>> m(n * n);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + 1) % n;
      if (i == j) continue;
      ndntb::topo::LinkSpec s;
      s.delay_ms = delay_ms;
      m[i * n + j] = s;
      m[j * n + i] = s;
    }
  }
  return ndntb::topo::Topology::build(std::vector<std::string>(n), std::move(m));
}

}  // namespace fixtures
