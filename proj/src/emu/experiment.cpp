#include "ndntb/emu/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ndntb/emu/aimd.hpp"
#include "ndntb/emu/apps.hpp"
#include "ndntb/topo/routing.hpp"

namespace ndntb::emu {

using nlohmann::json;

std::string_view to_string(ExperimentErrc e) {
  switch (e) {
    case ExperimentErrc::malformed: return "malformed";
    case ExperimentErrc::invalid_value: return "invalid_value";
    case ExperimentErrc::bad_strategy: return "bad_strategy";
    case ExperimentErrc::unknown_node: return "unknown_node";
    case ExperimentErrc::unknown_topology: return "unknown_topology";
    case ExperimentErrc::no_such_link: return "no_such_link";
    case ExperimentErrc::same_endpoints: return "same_endpoints";
    case ExperimentErrc::unreachable: return "unreachable";
  }
  return "unknown";
}

ndn::Name ExperimentSpec::prefix() const {
  return content_prefix ? *content_prefix : ndn::Name::parse(topo::name_prefix_for(producer));
}

namespace {

[[noreturn]] void fail(ExperimentErrc kind, const std::string& msg) { throw ExperimentError(kind, msg); }

std::size_t node_ref(const topo::Topology& t, const json& j, const char* field) {
  if (!j.is_string()) fail(ExperimentErrc::malformed, fmt::format("'{}' must be a node label", field));
  const auto idx = t.index_of(j.get<std::string>());
  if (!idx) fail(ExperimentErrc::unknown_node, fmt::format("unknown node '{}'", j.get<std::string>()));
  return *idx;
}

template <typename T>
T number(const json& doc, const char* field, T fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (!v.is_number()) fail(ExperimentErrc::malformed, fmt::format("'{}' must be a number", field));
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0)) {
      fail(ExperimentErrc::invalid_value, fmt::format("'{}' must be a non-negative integer", field));
    }
  }
  return v.get<T>();
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view text, const TopologyResolver& resolve) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(ExperimentErrc::malformed, "experiment spec must be a JSON object");

  ExperimentSpec spec;
  if (doc.contains("topology")) {
    try {
      spec.topology = topo::parse_adjacency(doc.at("topology").dump());
    } catch (const topo::TopologyError& e) {
      fail(ExperimentErrc::malformed, fmt::format("topology: {}", e.what()));
    }
  } else if (doc.contains("topology_id")) {
    if (!doc.at("topology_id").is_string()) fail(ExperimentErrc::malformed, "'topology_id' must be a string");
    const auto id = doc.at("topology_id").get<std::string>();
    std::optional<topo::Topology> t = resolve ? resolve(id) : std::nullopt;
    if (!t) fail(ExperimentErrc::unknown_topology, fmt::format("unknown topology '{}'", id));
    spec.topology = std::move(*t);
  } else {
    fail(ExperimentErrc::malformed, "missing 'topology' or 'topology_id'");
  }

  if (!doc.contains("consumer") || !doc.contains("producer")) {
    fail(ExperimentErrc::malformed, "'consumer' and 'producer' are required");
  }
  spec.consumer = node_ref(spec.topology, doc.at("consumer"), "consumer");
  spec.producer = node_ref(spec.topology, doc.at("producer"), "producer");

  if (doc.contains("content_prefix")) {
    if (!doc.at("content_prefix").is_string()) fail(ExperimentErrc::malformed, "'content_prefix' must be a string");
    try {
      spec.content_prefix = ndn::Name::parse(doc.at("content_prefix").get<std::string>());
    } catch (const ndn::NameError& e) {
      fail(ExperimentErrc::invalid_value, fmt::format("content_prefix: {}", e.what()));
    }
  }
  if (doc.contains("strategy")) {
    const json& s = doc.at("strategy");
    const auto parsed = s.is_string() ? ndn::parse_strategy(s.get<std::string>()) : std::nullopt;
    if (!parsed) fail(ExperimentErrc::bad_strategy, fmt::format("unknown strategy {}", s.dump()));
    spec.strategy = *parsed;
  }

  spec.demand_rate_mbps = number(doc, "demand_rate_mbps", spec.demand_rate_mbps);
  spec.payload_size = number(doc, "payload_size", spec.payload_size);
  spec.duration = static_cast<TimeUs>(std::llround(number(doc, "duration_s", 16.0) * 1e6));
  spec.repetitions = number(doc, "repetitions", spec.repetitions);
  spec.seed = number(doc, "seed", spec.seed);
  spec.pit_lifetime = ms_to_us(number(doc, "pit_lifetime_ms", us_to_ms(spec.pit_lifetime)));
  spec.cs_capacity = number(doc, "cs_capacity", spec.cs_capacity);
  if (doc.contains("realtime")) {
    if (!doc.at("realtime").is_boolean()) fail(ExperimentErrc::malformed, "'realtime' must be a boolean");
    spec.realtime = doc.at("realtime").get<bool>();
  }

  if (doc.contains("failures")) {
    const json& fs = doc.at("failures");
    if (!fs.is_array()) fail(ExperimentErrc::malformed, "'failures' must be an array");
    for (const json& f : fs) {
      if (!f.is_object() || !f.contains("a") || !f.contains("b") || !f.contains("at_s")) {
        fail(ExperimentErrc::malformed, "each failure needs 'a', 'b' and 'at_s'");
      }
      LinkFailure lf;
      lf.a = node_ref(spec.topology, f.at("a"), "a");
      lf.b = node_ref(spec.topology, f.at("b"), "b");
      lf.at = static_cast<TimeUs>(std::llround(number(f, "at_s", 0.0) * 1e6));
      if (f.contains("up")) {
        if (!f.at("up").is_boolean()) fail(ExperimentErrc::malformed, "'up' must be a boolean");
        lf.up = f.at("up").get<bool>();
      }
      spec.failures.push_back(lf);
    }
  }
  validate(spec);
  return spec;
}

void validate(const ExperimentSpec& spec) {
  const std::size_t n = spec.topology.node_count();
  if (spec.consumer >= n || spec.producer >= n) fail(ExperimentErrc::unknown_node, "consumer/producer out of range");
  if (spec.consumer == spec.producer) fail(ExperimentErrc::same_endpoints, "consumer and producer must differ");
  if (!(spec.demand_rate_mbps > 0)) fail(ExperimentErrc::invalid_value, "demand_rate_mbps must be > 0");
  if (spec.payload_size == 0) fail(ExperimentErrc::invalid_value, "payload_size must be > 0");
  if (spec.duration < 0) fail(ExperimentErrc::invalid_value, "duration_s must be >= 0");
  if (spec.repetitions < 1) fail(ExperimentErrc::invalid_value, "repetitions must be >= 1");
  if (spec.pit_lifetime <= 0) fail(ExperimentErrc::invalid_value, "pit_lifetime_ms must be > 0");
  for (const LinkFailure& f : spec.failures) {
    if (f.a >= n || f.b >= n || !spec.topology.link(f.a, f.b)) {
      fail(ExperimentErrc::no_such_link, fmt::format("no link between node {} and {}", f.a, f.b));
    }
    if (f.at < 0) fail(ExperimentErrc::invalid_value, "failure time must be >= 0");
  }
  const auto paths = topo::shortest_paths(spec.topology, spec.consumer);
  const bool reachable = std::any_of(paths.begin(), paths.end(),
                                     [&](const topo::PathInfo& p) { return p.destination == spec.producer; });
  if (!reachable) {
    fail(ExperimentErrc::unreachable, fmt::format("{} cannot reach {} at t=0", spec.topology.node(spec.consumer).label,
                                                  spec.topology.node(spec.producer).label));
  }
}

RunOutput run_repetition(const ExperimentSpec& spec, std::uint32_t r, const RunHooks& hooks) {
  RunOutput out;
  out.repetition = r;
  out.seed = spec.seed + r;
  out.duration = spec.duration;
  out.logs = std::make_shared<logrepo::LogStore>();

  NetworkConfig nc;
  nc.strategy = spec.strategy;
  nc.pit_lifetime = spec.pit_lifetime;
  nc.cs_capacity = spec.cs_capacity;
  nc.epoch = out.epoch;
  nc.realtime = spec.realtime;
  if (hooks.probe_batch) nc.on_probe_batch = [&hooks, r](const ProbeBatch& b) { hooks.probe_batch(r, b); };
  Network net(spec.topology, nc, *out.logs);

  const ndn::Name prefix = spec.prefix();
  if (!ndn::Name::parse(topo::name_prefix_for(spec.producer)).is_prefix_of(prefix)) {
    net.announce(prefix, spec.producer);
  }

  std::mt19937_64 rng(out.seed);
  ConsumerConfig cc;
  cc.prefix = prefix;
  cc.max_rate = demand_to_interest_rate(spec.demand_rate_mbps, spec.payload_size);
  cc.start_at = static_cast<TimeUs>(rng() % 5000);
  cc.stop_at = spec.duration;
  cc.seed = rng();

  net.attach(spec.producer, std::make_unique<ProducerApp>(spec.payload_size), prefix);
  auto& consumer = static_cast<ConsumerApp&>(net.attach(spec.consumer, std::make_unique<ConsumerApp>(cc)));
  for (const LinkFailure& f : spec.failures) {
    if (f.at < spec.duration) net.schedule_link_state(f.a, f.b, f.up, f.at);
  }

  if (hooks.started) hooks.started(r, net);
  try {
    net.run(spec.duration);
  } catch (...) {
    if (hooks.finished) hooks.finished(r, net);
    throw;
  }
  if (hooks.finished) hooks.finished(r, net);

  out.consumer.emitted = consumer.emitted();
  out.consumer.received = consumer.received();
  out.consumer.timeouts = consumer.timeouts();
  out.consumer.final_window = consumer.aimd().window;
  out.consumer.min_window = consumer.min_window();
  out.stats = net.stats();
  return out;
}

void for_each_run(const ExperimentSpec& spec, const std::function<void(RunOutput&&)>& sink, unsigned threads,
                  const RunHooks& hooks) {
  validate(spec);
  const std::uint32_t total = spec.repetitions;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, total);
  if (spec.realtime) threads = 1;

  if (threads <= 1) {
    for (std::uint32_t r = 0; r < total; ++r) sink(run_repetition(spec, r, hooks));
    return;
  }

  // Workers claim repetitions in order but may not run more than `window`
  // ahead of the sink, which bounds how many finished runs sit in memory.
  const std::uint32_t window = threads * 2;
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::optional<RunOutput>> done(total);
  std::exception_ptr error;
  std::uint32_t next = 0;
  std::uint32_t delivered = 0;
  bool abort = false;

  auto worker = [&] {
    for (;;) {
      std::uint32_t r;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return abort || next >= total || next < delivered + window; });
        if (abort || next >= total) return;
        r = next++;
      }
      try {
        RunOutput out = run_repetition(spec, r, hooks);
        std::lock_guard lock(mu);
        done[r] = std::move(out);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        abort = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);

  try {
    while (delivered < total) {
      RunOutput out;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return abort || done[delivered].has_value(); });
        if (abort) break;
        out = std::move(*done[delivered]);
        done[delivered].reset();
      }
      sink(std::move(out));
      {
        std::lock_guard lock(mu);
        ++delivered;
      }
      cv.notify_all();
    }
  } catch (...) {
    std::lock_guard lock(mu);
    if (!error) error = std::current_exception();
    abort = true;
  }
  cv.notify_all();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ProbeSample> probe_link_delays(const topo::Topology& topology) {
  logrepo::LogStore scratch;
  NetworkConfig nc;
  std::vector<ProbeSample> out;
  nc.on_probe_batch = [&out](const ProbeBatch& b) {
    if (b.round == 0) out = b.samples;
  };
  Network net(topology, nc, scratch);
  TimeUs longest = 0;
  for (const LinkRuntime& l : net.links()) longest = std::max(longest, l.delay);
  net.run(2 * longest + 1);
  return out;
}

void write_run_logs(const std::filesystem::path& dir, const RunOutput& run) {
  const auto rep_dir = dir / fmt::format("rep-{}", run.repetition);
  std::filesystem::create_directories(rep_dir);
  const logrepo::LogSnapshot snap = run.logs->snapshot();

  std::ofstream all(rep_dir / "events.log", std::ios::binary);
  std::map<std::string, std::ofstream> per_host;
  for (const logrepo::SyslogRecord& rec : snap.records()) {
    const std::string line = logrepo::format_syslog(rec);
    all << line << '\n';
    auto it = per_host.find(rec.host);
    if (it == per_host.end()) {
      it = per_host.emplace(rec.host, std::ofstream(rep_dir / (rec.host + ".log"), std::ios::binary)).first;
    }
    it->second << line << '\n';
  }
  if (!all) throw std::runtime_error(fmt::format("cannot write {}", (rep_dir / "events.log").string()));
}

void write_manifest(const std::filesystem::path& dir, const ExperimentSpec& spec,
                    const std::vector<ConsumerSummary>& runs) {
  std::filesystem::create_directories(dir);
  json m;
  m["topology"] = json::parse(topo::serialize_adjacency(spec.topology));
  m["consumer"] = spec.topology.node(spec.consumer).label;
  m["producer"] = spec.topology.node(spec.producer).label;
  m["content_prefix"] = spec.prefix().uri();
  m["strategy"] = std::string(ndn::to_string(spec.strategy));
  m["demand_rate_mbps"] = spec.demand_rate_mbps;
  m["payload_size"] = spec.payload_size;
  m["duration_s"] = us_to_sec(spec.duration);
  m["repetitions"] = spec.repetitions;
  m["seed"] = spec.seed;
  m["pit_lifetime_ms"] = us_to_ms(spec.pit_lifetime);
  m["cs_capacity"] = spec.cs_capacity;
  m["epoch"] = format_rfc3339(kEmulationEpochUs);
  json fs = json::array();
  for (const LinkFailure& f : spec.failures) {
    fs.push_back({{"a", spec.topology.node(f.a).label},
                  {"b", spec.topology.node(f.b).label},
                  {"at_s", us_to_sec(f.at)},
                  {"up", f.up}});
  }
  m["failures"] = fs;
  json reps = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const ConsumerSummary& c = runs[r];
    reps.push_back({{"repetition", r},
                    {"seed", spec.seed + r},
                    {"dir", fmt::format("rep-{}", r)},
                    {"interests_emitted", c.emitted},
                    {"data_received", c.received},
                    {"timeouts", c.timeouts},
                    {"final_window", c.final_window}});
  }
  m["runs"] = reps;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", (dir / "manifest.json").string()));
}

}  // namespace ndntb::emu
