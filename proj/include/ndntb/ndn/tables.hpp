#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ndntb/ndn/name.hpp"
#include "ndntb/ndn/packet.hpp"
#include "ndntb/topo/routing.hpp"
#include "ndntb/util/time.hpp"

namespace ndntb::ndn {

struct FaceId {
  std::uint32_t value = 0;

  friend auto operator<=>(const FaceId&, const FaceId&) = default;
};

using FaceKind = topo::FaceKind;

struct Face {
  FaceId id;
  std::string remote;  ///< neighbor label, or the application name for app faces
  FaceKind kind = FaceKind::ethernet;
};

struct NextHop {
  FaceId face;
  double cost = 0.0;
};

struct FibEntry {
  Name prefix;
  std::vector<NextHop> next_hops;
};

/// Name tree keyed by component. Sibling prefixes share one child table, so
/// bulk installs under a common parent stay cache-local.
class Fib {
 public:
  /// Adds `face` to the entry for `prefix`, or updates its cost.
  void insert(const Name& prefix, FaceId face, double cost);
  /// Removes `face` from `prefix`; drops the entry once no next hop remains.
  void remove(const Name& prefix, FaceId face);

  /// Longest component-wise prefix match. The root name never matches.
  const FibEntry* longest_prefix_match(const Name& name) const;
  const FibEntry* find_exact(const Name& prefix) const;

  std::size_t size() const noexcept { return size_; }

 private:
  struct ComponentHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  struct Node;
  // Node-based, so references to values stay put across inserts.
  using Children = std::unordered_map<std::string, Node, ComponentHash, std::equal_to<>>;
  struct Node {
    std::unique_ptr<Children> children;  // leaves carry none
    std::optional<FibEntry> entry;
  };

  static const Node* child(const Node& node, std::string_view component);
  const Node* find_node(const Name& prefix) const;

  Node root_;
  std::size_t size_ = 0;
};

const FibEntry* fib_lpm(const Fib& fib, const Name& name);

struct PitEntry {
  Name name;
  std::vector<FaceId> in_faces;
  std::vector<FaceId> out_faces;
  std::vector<std::uint32_t> nonces;
  TimeUs expiry = 0;

  bool has_nonce(std::uint32_t nonce) const;
  bool has_in_face(FaceId face) const;
};

class Pit {
 public:
  PitEntry* find(const Name& name);
  const PitEntry* find(const Name& name) const;
  PitEntry& insert(PitEntry entry);
  void erase(const Name& name);

  /// Removes every entry with expiry <= now; returns how many were removed.
  std::size_t sweep(TimeUs now);

  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<const PitEntry*> entries() const;

 private:
  std::unordered_map<std::string, PitEntry> entries_;
};

struct CsEntry {
  Name name;
  Data data;
  TimeUs inserted_at = 0;
  TimeUs last_used = 0;
};

/// Exact-name cache with least-recently-used eviction.
class ContentStore {
 public:
  explicit ContentStore(std::size_t capacity = 1000) : capacity_(capacity) {}

  /// Hit refreshes the entry's recency.
  const CsEntry* lookup(const Name& name, TimeUs now);
  void insert(const Data& data, TimeUs now);

  bool contains(const Name& name) const { return index_.count(name.uri()) > 0; }
  std::size_t size() const noexcept { return lru_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

  /// Names from most to least recently used.
  std::vector<Name> names_by_recency() const;

 private:
  std::size_t capacity_;
  std::list<CsEntry> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<CsEntry>::iterator> index_;
};

}  // namespace ndntb::ndn
