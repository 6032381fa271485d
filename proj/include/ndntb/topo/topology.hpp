#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndntb::topo {

enum class TopoErrc {
  asymmetric,
  non_positive_delay,
  duplicate_label,
  malformed,
  unknown_node,
  no_such_link,
};

std::string_view to_string(TopoErrc errc);

class TopologyError : public std::runtime_error {
 public:
  TopologyError(TopoErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  TopoErrc kind() const noexcept { return kind_; }

 private:
  TopoErrc kind_;
};

struct NodeId {
  std::size_t index = 0;
  std::string label;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class Medium { wired, wireless };

std::string_view to_string(Medium m);

struct LinkSpec {
  double delay_ms = 1.0;
  Medium medium = Medium::wired;
  bool up = true;

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

/// An undirected link as a pair of node indices, `a < b`.
struct LinkKey {
  std::size_t a = 0;
  std::size_t b = 0;

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

/// Validated node set plus a symmetric adjacency matrix of optional links.
/// Construction goes through `Topology::build`, which enforces every invariant.
class Topology {
 public:
  Topology() = default;

  /// `matrix` is row-major, `labels.size()` squared entries. Labels may be
  /// empty strings, which default to "N<i>".
  static Topology build(std::vector<std::string> labels, std::vector<std::optional<LinkSpec>> matrix);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const NodeId& node(std::size_t index) const;

  /// Throws `TopologyError{unknown_node}` when absent.
  const NodeId& find(std::string_view label) const;
  std::optional<std::size_t> index_of(std::string_view label) const;

  const std::optional<LinkSpec>& link(std::size_t i, std::size_t j) const { return matrix_[i * nodes_.size() + j]; }

  /// All undirected links in (a, b) lexicographic order.
  std::vector<LinkKey> links() const;

  /// Neighbor indices of `i` over present links (up or down), ascending.
  std::vector<std::size_t> neighbors(std::size_t i) const;

  /// True when every node is reachable from node 0 over up links.
  bool connected() const;

  /// Returns a copy with link (a, b) set to `up` in both directions.
  Topology with_link_state(std::size_t a, std::size_t b, bool up) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::optional<LinkSpec>> matrix_;
};

/// Sets link (a, b) up or down. Previously compiled routes are left untouched.
Topology apply_link_state(const Topology& topo, const NodeId& a, const NodeId& b, bool up);

/// Adjacency document (JSON):
///   {"labels": [...], "matrix": [[delay|null, ...], ...], "media": [["wired"|"wireless"|null, ...], ...]}
Topology parse_adjacency(std::string_view text);
std::string serialize_adjacency(const Topology& topo);

}  // namespace ndntb::topo
