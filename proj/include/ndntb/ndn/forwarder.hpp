#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ndntb/ndn/packet.hpp"
#include "ndntb/ndn/strategy.hpp"
#include "ndntb/ndn/tables.hpp"
#include "ndntb/topo/topology.hpp"

namespace ndntb::ndn {

constexpr TimeUs kDefaultPitLifetimeUs = 4000 * kUsPerMs;
constexpr std::size_t kDefaultCsCapacity = 1000;

struct ForwarderConfig {
  Strategy strategy = Strategy::best_route;
  TimeUs pit_lifetime = kDefaultPitLifetimeUs;
  std::size_t cs_capacity = kDefaultCsCapacity;
};

struct FaceCounters {
  std::uint64_t interest_in = 0;
  std::uint64_t interest_out = 0;
  std::uint64_t data_in = 0;
  std::uint64_t data_out = 0;
};

struct NodeCounters {
  std::uint64_t cs_hits = 0;
  std::uint64_t aggregated = 0;
  std::uint64_t duplicate_nonce = 0;
  std::uint64_t unroutable = 0;
  std::uint64_t no_eligible_face = 0;
  std::uint64_t hop_limit_exhausted = 0;
  std::uint64_t unsolicited_data = 0;
  std::uint64_t pit_timeouts = 0;
};

/// What happened to an incoming interest.
enum class InterestOutcome {
  cs_hit,
  aggregated,
  duplicate,
  forwarded,
  unroutable,
  hop_limit_exhausted,
  no_eligible_face,
};

std::string_view to_string(InterestOutcome o);

struct InterestResult {
  InterestOutcome outcome = InterestOutcome::forwarded;
  std::vector<std::pair<FaceId, Interest>> interests;
  std::vector<std::pair<FaceId, Data>> data;
};

struct DataResult {
  bool solicited = false;
  std::vector<std::pair<FaceId, Data>> data;
};

/// One node's NDN data plane. Single owner; not internally synchronized.
class Forwarder {
 public:
  Forwarder(topo::NodeId node, ForwarderConfig config = {});

  FaceId add_face(std::string remote, FaceKind kind);
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Face& face(FaceId id) const { return faces_.at(id.value); }

  void add_route(const Name& prefix, FaceId face, double cost) { fib_.insert(prefix, face, cost); }

  /// Pipeline order: content store, then PIT (duplicate nonce drop or
  /// aggregation), then hop limit, then FIB and strategy.
  InterestResult on_interest(const Interest& interest, FaceId in_face, TimeUs now);

  /// Satisfies the exact-name PIT entry: data goes out on every in-face, the
  /// entry is removed and the data cached. Unmatched data is dropped.
  DataResult on_data(const Data& data, FaceId in_face, TimeUs now);

  /// Removes expired PIT entries (expiry <= now), counting them as timeouts.
  std::size_t pit_sweep(TimeUs now);

  const topo::NodeId& node() const noexcept { return node_; }
  const ForwarderConfig& config() const noexcept { return config_; }
  Strategy strategy() const noexcept { return config_.strategy; }
  void set_strategy(Strategy s) { config_.strategy = s; }

  const Fib& fib() const noexcept { return fib_; }
  Fib& fib() noexcept { return fib_; }
  const Pit& pit() const noexcept { return pit_; }
  const ContentStore& cs() const noexcept { return cs_; }
  ContentStore& cs() noexcept { return cs_; }

  const FaceCounters& counters(FaceId face) const { return face_counters_.at(face.value); }
  const NodeCounters& counters() const noexcept { return counters_; }

 private:
  topo::NodeId node_;
  ForwarderConfig config_;
  std::vector<Face> faces_;
  std::vector<FaceCounters> face_counters_;
  NodeCounters counters_;
  Fib fib_;
  Pit pit_;
  ContentStore cs_;
};

}  // namespace ndntb::ndn
