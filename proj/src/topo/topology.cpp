#include "ndntb/topo/topology.hpp"

#include <queue>
#include <unordered_set>

#include <fmt/format.h>

namespace ndntb::topo {

std::string_view to_string(TopoErrc errc) {
  switch (errc) {
    case TopoErrc::asymmetric: return "asymmetric";
    case TopoErrc::non_positive_delay: return "non_positive_delay";
    case TopoErrc::duplicate_label: return "duplicate_label";
    case TopoErrc::malformed: return "malformed";
    case TopoErrc::unknown_node: return "unknown_node";
    case TopoErrc::no_such_link: return "no_such_link";
  }
  return "unknown";
}

std::string_view to_string(Medium m) { return m == Medium::wired ? "wired" : "wireless"; }

Topology Topology::build(std::vector<std::string> labels, std::vector<std::optional<LinkSpec>> matrix) {
  const std::size_t n = labels.size();
  if (n == 0) throw TopologyError(TopoErrc::malformed, "topology has no nodes");
  if (matrix.size() != n * n) {
    throw TopologyError(TopoErrc::malformed, fmt::format("matrix has {} entries, expected {}", matrix.size(), n * n));
  }

  Topology t;
  std::unordered_set<std::string> seen;
  t.nodes_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = labels[i].empty() ? fmt::format("N{}", i) : std::move(labels[i]);
    if (!seen.insert(label).second) {
      throw TopologyError(TopoErrc::duplicate_label, fmt::format("duplicate node label '{}'", label));
    }
    t.nodes_.push_back(NodeId{i, std::move(label)});
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i]) {
      throw TopologyError(TopoErrc::malformed, fmt::format("self-loop on node {}", t.nodes_[i].label));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& fwd = matrix[i * n + j];
      if (!fwd) continue;
      if (!(fwd->delay_ms > 0.0)) {
        throw TopologyError(TopoErrc::non_positive_delay,
                            fmt::format("link {}-{} has non-positive delay {}", t.nodes_[i].label,
                                        t.nodes_[j].label, fwd->delay_ms));
      }
      const auto& rev = matrix[j * n + i];
      if (!rev || rev->delay_ms != fwd->delay_ms || rev->medium != fwd->medium || rev->up != fwd->up) {
        throw TopologyError(TopoErrc::asymmetric, fmt::format("link {}-{} is not mirrored by {}-{}",
                                                              t.nodes_[i].label, t.nodes_[j].label,
                                                              t.nodes_[j].label, t.nodes_[i].label));
      }
    }
  }
  t.matrix_ = std::move(matrix);
  return t;
}

const NodeId& Topology::node(std::size_t index) const {
  if (index >= nodes_.size()) {
    throw TopologyError(TopoErrc::unknown_node, fmt::format("node index {} out of range", index));
  }
  return nodes_[index];
}

std::optional<std::size_t> Topology::index_of(std::string_view label) const {
  for (const auto& n : nodes_) {
    if (n.label == label) return n.index;
  }
  return std::nullopt;
}

const NodeId& Topology::find(std::string_view label) const {
  if (auto idx = index_of(label)) return nodes_[*idx];
  throw TopologyError(TopoErrc::unknown_node, fmt::format("no node labeled '{}'", label));
}

std::vector<LinkKey> Topology::links() const {
  std::vector<LinkKey> out;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix_[i * n + j]) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<std::size_t> Topology::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (matrix_[i * n + j]) out.push_back(j);
  }
  return out;
}

bool Topology::connected() const {
  const std::size_t n = nodes_.size();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const auto& l = matrix_[u * n + v];
      if (l && l->up && !seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

Topology Topology::with_link_state(std::size_t a, std::size_t b, bool up) const {
  const std::size_t n = nodes_.size();
  if (a >= n || b >= n || !matrix_[a * n + b]) {
    throw TopologyError(TopoErrc::no_such_link,
                        fmt::format("no link between {} and {}", a < n ? nodes_[a].label : fmt::format("#{}", a),
                                    b < n ? nodes_[b].label : fmt::format("#{}", b)));
  }
  Topology t = *this;
  t.matrix_[a * n + b]->up = up;
  t.matrix_[b * n + a]->up = up;
  return t;
}

Topology apply_link_state(const Topology& topo, const NodeId& a, const NodeId& b, bool up) {
  return topo.with_link_state(a.index, b.index, up);
}

}  // namespace ndntb::topo
