#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndntb/emu/network.hpp"
#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/ndn/name.hpp"
#include "ndntb/ndn/strategy.hpp"
#include "ndntb/topo/topology.hpp"

namespace ndntb::emu {

enum class ExperimentErrc {
  malformed,         ///< not JSON, or a field has the wrong type
  invalid_value,     ///< e.g. repetitions < 1, demand <= 0
  bad_strategy,
  unknown_node,
  unknown_topology,
  no_such_link,
  same_endpoints,    ///< consumer == producer
  unreachable,       ///< consumer cannot reach producer at t = 0
};

std::string_view to_string(ExperimentErrc e);

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(ExperimentErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ExperimentErrc kind() const noexcept { return kind_; }

 private:
  ExperimentErrc kind_;
};

struct LinkFailure {
  std::size_t a = 0;
  std::size_t b = 0;
  TimeUs at = 0;
  /// false takes the link down, true restores it.
  bool up = false;
};

struct ExperimentSpec {
  topo::Topology topology;
  std::size_t consumer = 0;
  std::size_t producer = 0;
  /// Defaults to the producer's main prefix.
  std::optional<ndn::Name> content_prefix;
  ndn::Strategy strategy = ndn::Strategy::best_route;
  double demand_rate_mbps = 20.0;
  std::uint32_t payload_size = 1250;
  TimeUs duration = 16 * kUsPerSec;
  std::vector<LinkFailure> failures;
  std::uint32_t repetitions = 1;
  std::uint64_t seed = 0;
  TimeUs pit_lifetime = ndn::kDefaultPitLifetimeUs;
  std::size_t cs_capacity = ndn::kDefaultCsCapacity;
  /// Pace runs at wall-clock speed (repetitions then run one at a time).
  bool realtime = false;

  ndn::Name prefix() const;
};

/// Resolves a "topology_id" field to a stored topology.
using TopologyResolver = std::function<std::optional<topo::Topology>(const std::string& id)>;

/// JSON document:
///   {"topology": <adjacency doc> | "topology_id": "...", "consumer": "C0",
///    "producer": "P1", "content_prefix": "/testbed/P5", "strategy": "multicast",
///    "demand_rate_mbps": 20, "payload_size": 1250, "duration_s": 16,
///    "failures": [{"a": "R3", "b": "R4", "at_s": 8, "up": false}],
///    "repetitions": 20, "seed": 1, "pit_lifetime_ms": 4000, "cs_capacity": 1000}
/// Nodes are referenced by label. Validates the result.
ExperimentSpec parse_experiment_spec(std::string_view json, const TopologyResolver& resolve = {});

/// Throws ExperimentError on any violated invariant.
void validate(const ExperimentSpec& spec);

struct ConsumerSummary {
  std::uint64_t emitted = 0;
  std::uint64_t received = 0;
  std::uint64_t timeouts = 0;
  double final_window = 1.0;
  double min_window = 1.0;
};

/// Everything one repetition produced. The log store holds the complete,
/// timestamp-ordered record stream of the run.
struct RunOutput {
  std::uint32_t repetition = 0;
  std::uint64_t seed = 0;
  TimeUs epoch = kEmulationEpochUs;
  TimeUs duration = 0;
  std::shared_ptr<logrepo::LogStore> logs;
  ConsumerSummary consumer;
  NetworkStats stats;
};

/// Optional observers of live runs. Callbacks may fire from worker threads.
struct RunHooks {
  /// Before the event loop starts; the network stays valid until `finished`.
  std::function<void(std::uint32_t rep, Network&)> started;
  std::function<void(std::uint32_t rep, Network&)> finished;
  std::function<void(std::uint32_t rep, const ProbeBatch&)> probe_batch;
};

/// Runs repetition `r` with seed spec.seed + r.
RunOutput run_repetition(const ExperimentSpec& spec, std::uint32_t r, const RunHooks& hooks = {});

/// Runs every repetition on up to `threads` workers (0 = hardware
/// concurrency) and hands results to `sink` in repetition order.
void for_each_run(const ExperimentSpec& spec, const std::function<void(RunOutput&&)>& sink, unsigned threads = 0,
                  const RunHooks& hooks = {});

/// One probe round over `topology` (down links report loss).
std::vector<ProbeSample> probe_link_delays(const topo::Topology& topology);

/// Writes `dir`/rep-<r>/<host>.log (one RFC 5424 line per record, per host),
/// `dir`/rep-<r>/events.log (all records) and updates nothing else.
void write_run_logs(const std::filesystem::path& dir, const RunOutput& run);

/// Writes `dir`/manifest.json describing the spec and each repetition.
void write_manifest(const std::filesystem::path& dir, const ExperimentSpec& spec,
                    const std::vector<ConsumerSummary>& runs);

}  // namespace ndntb::emu
