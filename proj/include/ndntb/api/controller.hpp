#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ndntb/discovery/lease.hpp"
#include "ndntb/discovery/provisioning.hpp"
#include "ndntb/emu/experiment.hpp"
#include "ndntb/eval/summary.hpp"
#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/topo/routing.hpp"
#include "ndntb/topo/topology.hpp"

namespace ndntb::api {

/// Lookup of an id, link or node that does not exist.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentState { pending, running, done, failed };
std::string_view to_string(ExperimentState s);

struct ExperimentHandle {
  std::string id;
  ExperimentState state = ExperimentState::pending;
  emu::ExperimentSpec spec;
  std::optional<std::string> topology_id;
  TimeUs created_at = 0;
  std::uint32_t completed = 0;  ///< repetitions finished
  std::string error;
};

struct DelayBatch {
  std::uint64_t seq = 0;
  std::string source;  ///< "idle" or the experiment id
  std::uint64_t round = 0;
  std::vector<emu::ProbeSample> samples;
};

/// Fan-out of probe rounds to any number of stream readers.
class ProbeHub {
 public:
  void publish(std::string source, std::uint64_t round, std::vector<emu::ProbeSample> samples);
  /// Whether any probe session (idle or experiment) is live.
  void set_active(bool active);
  bool active() const;
  /// Sequence number of the newest batch (0 if none).
  std::uint64_t head() const;
  /// First batch with seq > after; empty on timeout or when the session
  /// ends or `close()` was called.
  std::optional<DelayBatch> next(std::uint64_t after, std::chrono::milliseconds timeout) const;
  void close();

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<DelayBatch> recent_;
  std::uint64_t seq_ = 0;
  bool active_ = false;
  bool closed_ = false;
};

struct ControllerOptions {
  std::filesystem::path data_dir = "data";
  TimeUs idle_probe_interval = 5 * kUsPerSec;
  /// Write per-node log files for every repetition.
  bool keep_logs = true;
  unsigned threads = 0;
  std::vector<eval::Window> windows{{6, 8}, {8, 10}};
  std::string log_sink = "10.0.0.1:514";
};

/// Controller state behind the HTTP surface: stored topologies, the active
/// deployment, the experiment queue and its worker, the probe feed, the
/// live log store and the lease registry.
class Controller {
 public:
  explicit Controller(ControllerOptions options);
  ~Controller();

  Controller(const Controller&) = delete;
  Controller& operator=(const Controller&) = delete;

  const ControllerOptions& options() const noexcept { return options_; }

  /// Parses, stores and deploys a topology; throws topo::TopologyError.
  std::string add_topology(std::string_view document);
  topo::Topology topology(const std::string& id) const;
  std::vector<topo::NodeConfig> configs(const std::string& id) const;
  std::optional<std::string> active_topology() const;

  /// Parses and queues an experiment; throws emu::ExperimentError.
  ExperimentHandle submit_experiment(std::string_view spec_json);
  ExperimentHandle experiment(const std::string& id) const;
  std::vector<ExperimentHandle> experiments() const;
  /// Summaries of a finished experiment; empty until it is done.
  std::optional<std::vector<eval::RunSummary>> metrics(const std::string& id) const;

  /// Sets a link by label on the active deployment and on every running
  /// emulation that has it. Throws NotFound when no one has the link.
  void set_link_state(const std::string& a, const std::string& b, bool up);

  ProbeHub& probes() noexcept { return hub_; }
  logrepo::LogStore& logs() noexcept { return logs_; }
  discovery::LeaseRegistry& leases() noexcept { return leases_; }

  /// Leases are persisted here after every change.
  std::filesystem::path lease_file() const { return options_.data_dir / "leases.jsonl"; }
  void on_lease(const discovery::LeaseRecord& lease);
  /// Plan for the node whose address matches the lease, in the active
  /// deployment. Throws NotFound.
  discovery::ProvisioningPlan plan_for(const std::array<std::uint8_t, 6>& mac) const;

  /// Blocks until the experiment leaves pending/running, or the timeout.
  bool wait(const std::string& id, std::chrono::milliseconds timeout) const;

  void shutdown();

 private:
  struct Stored {
    topo::Topology topology;
    std::vector<topo::NodeConfig> configs;
  };
  struct Job {
    ExperimentHandle handle;
    std::optional<std::vector<eval::RunSummary>> summaries;
  };

  void worker_loop();
  void idle_probe_loop();
  void run_job(const std::string& id);

  ControllerOptions options_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<std::string, Stored> topologies_;
  std::uint64_t next_topology_ = 1;
  std::optional<std::string> active_;
  std::optional<topo::Topology> deployed_;  // active topology with live link state
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_experiment_ = 1;
  std::set<emu::Network*> live_;
  bool stopping_ = false;

  ProbeHub hub_;
  logrepo::LogStore logs_;
  discovery::LeaseRegistry leases_;
  std::thread worker_;
  std::thread idle_;
};

}  // namespace ndntb::api
