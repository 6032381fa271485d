#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/ndn/forwarder.hpp"
#include "ndntb/topo/routing.hpp"
#include "ndntb/topo/topology.hpp"
#include "ndntb/util/time.hpp"

namespace ndntb::emu {

constexpr TimeUs kDefaultProbeInterval = 5 * kUsPerSec;
constexpr TimeUs kPitSweepInterval = 1 * kUsPerSec;
inline constexpr const char* kControllerAddress = "10.0.0.1";

struct ProbeSample {
  std::string link;            ///< "A-B"
  std::optional<double> ms;    ///< absent on loss

  friend bool operator==(const ProbeSample&, const ProbeSample&) = default;
};

/// Every link's result for one probe round.
struct ProbeBatch {
  std::uint64_t round = 0;
  TimeUs at = 0;  ///< emulator time the round started
  std::vector<ProbeSample> samples;  ///< in link order
};

struct NetworkConfig {
  ndn::Strategy strategy = ndn::Strategy::best_route;
  TimeUs pit_lifetime = ndn::kDefaultPitLifetimeUs;
  std::size_t cs_capacity = ndn::kDefaultCsCapacity;
  /// Per-node override of cs_capacity, by node index.
  std::vector<std::pair<std::size_t, std::size_t>> cs_capacity_overrides;
  /// 0 disables link probing.
  TimeUs probe_interval = kDefaultProbeInterval;
  /// Origin added to emulator time for record timestamps and received_at.
  TimeUs epoch = kEmulationEpochUs;
  /// Pace the event loop so emulator time tracks wall-clock time.
  bool realtime = false;
  /// Called once a probe round has a result for every link.
  std::function<void(const ProbeBatch&)> on_probe_batch;
};

class Network;

/// An application bound to one node through an app face.
class App {
 public:
  virtual ~App() = default;
  virtual void start(Network& net, TimeUs now) = 0;
  virtual void on_interest(Network& net, const ndn::Interest& interest, TimeUs now);
  virtual void on_data(Network& net, const ndn::Data& data, TimeUs now);
  virtual void on_timer(Network& net, std::uint64_t a, std::uint64_t b, TimeUs now);

  std::size_t node() const noexcept { return node_; }
  ndn::FaceId face() const noexcept { return face_; }
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Network;
  std::size_t node_ = 0;
  ndn::FaceId face_;
  std::size_t id_ = 0;
};

enum class EventKind { packet_arrival, app_timer, probe_timer, probe_reply, failure, pit_sweep, experiment_end };

struct PacketArrival {
  std::size_t link = 0;
  std::uint64_t epoch = 0;
  std::size_t to_node = 0;
  ndn::FaceId face;
  std::variant<ndn::Interest, ndn::Data> packet;
};

struct AppTimer {
  std::size_t app = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

struct ProbeTimer {};

struct ProbeReply {
  std::uint64_t round = 0;
  std::size_t link = 0;
  std::uint64_t epoch = 0;
  TimeUs sent_at = 0;
};

struct LinkStateChange {
  std::size_t link = 0;
  bool up = false;
};

struct PitSweep {};
struct ExperimentEnd {};

using EventPayload =
    std::variant<PacketArrival, AppTimer, ProbeTimer, ProbeReply, LinkStateChange, PitSweep, ExperimentEnd>;

/// Events execute in (at, seq) order; seq is assigned at scheduling time.
struct Event {
  TimeUs at = 0;
  std::uint64_t seq = 0;
  EventPayload payload;

  EventKind kind() const;
};

/// Binary min-heap on (at, seq).
class EventQueue {
 public:
  void push(TimeUs at, EventPayload payload);
  bool empty() const noexcept { return heap_.empty(); }
  const Event& top() const { return heap_.front(); }
  Event pop();
  std::size_t size() const noexcept { return heap_.size(); }
  std::uint64_t scheduled() const noexcept { return next_seq_; }

 private:
  std::vector<Event> heap_;
  std::uint64_t next_seq_ = 0;
};

struct LinkRuntime {
  topo::LinkKey key;
  topo::LinkSpec spec;
  TimeUs delay = 0;
  /// Bumped on every state change; packets sent under an older epoch are lost.
  std::uint64_t epoch = 0;
  std::string name;  ///< "A-B" by label, lower index first
  std::uint64_t dropped = 0;
};

struct NetworkStats {
  std::uint64_t events = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;
};

/// Emulated testbed: per-node forwarders joined by delay links, driven by a
/// single-threaded discrete-event loop. Routes are installed once from the
/// topology as given; link failures never trigger recomputation.
class Network {
 public:
  Network(const topo::Topology& topology, NetworkConfig config, logrepo::LogStore& logs);

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  const topo::Topology& topology() const noexcept { return topology_; }
  const NetworkConfig& config() const noexcept { return config_; }
  TimeUs now() const noexcept { return now_; }

  ndn::Forwarder& forwarder(std::size_t node) { return forwarders_.at(node); }
  const ndn::Forwarder& forwarder(std::size_t node) const { return forwarders_.at(node); }
  const std::vector<LinkRuntime>& links() const noexcept { return links_; }
  const NetworkStats& stats() const noexcept { return stats_; }
  const std::string& address(std::size_t node) const { return addresses_.at(node); }

  /// Throws TopologyError{no_such_link}.
  std::size_t link_index(std::size_t a, std::size_t b) const;

  /// Attaches `app` to `node` through a new app face; `prefix`, when set, is
  /// routed to the app (producers).
  App& attach(std::size_t node, std::unique_ptr<App> app, const std::optional<ndn::Name>& prefix = std::nullopt);

  /// Schedules link (a, b) to go down (or up) at time `at`.
  void schedule_link_state(std::size_t a, std::size_t b, bool up, TimeUs at);

  /// Thread-safe: applies a link state change at the loop's current time.
  void inject_link_state(std::size_t a, std::size_t b, bool up);

  /// Routes `prefix` toward `owner` on every other node along the same
  /// next hops as the owner's main prefix.
  void announce(const ndn::Name& prefix, std::size_t owner);

  void schedule_timer(const App& app, TimeUs at, std::uint64_t a, std::uint64_t b = 0);

  /// Called by apps.
  void express_interest(const App& app, const ndn::Interest& interest);
  void put_data(const App& app, const ndn::Data& data);
  void log(std::size_t node, logrepo::Severity severity, std::string app, std::string msg);

  /// Starts apps and probing at t = 0, then runs every event with at < end.
  /// Ends with an experiment_end event at `end` that writes counter summaries.
  void run(TimeUs end);

  /// Thread-safe: makes run() return at its next event.
  void request_stop() { stop_requested_ = true; }

 private:
  struct FaceBinding {
    bool is_app = false;
    std::size_t link = 0;       // link faces
    std::size_t remote = 0;     // peer node
    ndn::FaceId remote_face;    // face id at peer
    std::size_t app = 0;        // app faces
  };

  void install_routes();
  void dispatch(Event& ev);
  void deliver_interest(std::size_t node, ndn::FaceId face, const ndn::Interest& interest);
  void deliver_data(std::size_t node, ndn::FaceId face, const ndn::Data& data);
  void transmit(std::size_t node, ndn::FaceId face, std::variant<ndn::Interest, ndn::Data> packet);
  void apply_link_state(std::size_t link, bool up);
  void run_probe_round();
  void drain_injections();
  void record_probe(std::uint64_t round, std::size_t link, std::optional<double> ms);
  void wait_until(TimeUs at, std::chrono::steady_clock::time_point wall_origin);
  void log_controller(logrepo::Severity severity, std::string app, std::string msg);

  topo::Topology topology_;
  NetworkConfig config_;
  logrepo::LogStore& logs_;
  std::vector<std::string> addresses_;
  std::vector<ndn::Forwarder> forwarders_;
  std::vector<std::vector<FaceBinding>> bindings_;
  std::vector<LinkRuntime> links_;
  std::vector<std::vector<topo::MultipathRoute>> multipath_;
  std::vector<std::size_t> link_lookup_;  // n*n -> link index + 1, 0 if none
  std::vector<std::unique_ptr<App>> apps_;
  EventQueue queue_;
  TimeUs now_ = 0;
  NetworkStats stats_;

  std::mutex inject_mu_;
  std::vector<LinkStateChange> injected_;
  std::atomic<bool> has_injected_{false};
  std::atomic<bool> stop_requested_{false};

  struct OpenRound {
    ProbeBatch batch;
    std::size_t pending = 0;
  };
  std::uint64_t next_round_ = 0;
  std::vector<OpenRound> open_rounds_;
};

}  // namespace ndntb::emu
