#include "ndntb/api/controller.hpp"

#include <fstream>

#include <fmt/format.h>

namespace ndntb::api {

std::string_view to_string(ExperimentState s) {
  switch (s) {
    case ExperimentState::pending: return "pending";
    case ExperimentState::running: return "running";
    case ExperimentState::done: return "done";
    case ExperimentState::failed: return "failed";
  }
  return "unknown";
}

// ---- ProbeHub

namespace {
constexpr std::size_t kRecentBatches = 64;
}

void ProbeHub::publish(std::string source, std::uint64_t round, std::vector<emu::ProbeSample> samples) {
  {
    std::lock_guard lock(mu_);
    recent_.push_back(DelayBatch{++seq_, std::move(source), round, std::move(samples)});
    if (recent_.size() > kRecentBatches) recent_.pop_front();
  }
  cv_.notify_all();
}

void ProbeHub::set_active(bool active) {
  {
    std::lock_guard lock(mu_);
    active_ = active;
  }
  cv_.notify_all();
}

bool ProbeHub::active() const {
  std::lock_guard lock(mu_);
  return active_ && !closed_;
}

std::uint64_t ProbeHub::head() const {
  std::lock_guard lock(mu_);
  return seq_;
}

std::optional<DelayBatch> ProbeHub::next(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !active_ || seq_ > after; });
  if (closed_ || seq_ <= after) return std::nullopt;
  for (const DelayBatch& b : recent_) {
    if (b.seq > after) return b;
  }
  return std::nullopt;
}

void ProbeHub::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

// ---- Controller

Controller::Controller(ControllerOptions options)
    : options_(std::move(options)), leases_(discovery::LeaseRegistry::load(options_.data_dir / "leases.jsonl")) {
  worker_ = std::thread([this] { worker_loop(); });
  idle_ = std::thread([this] { idle_probe_loop(); });
}

Controller::~Controller() { shutdown(); }

void Controller::shutdown() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && !worker_.joinable()) return;
    stopping_ = true;
    for (emu::Network* net : live_) net->request_stop();
  }
  cv_.notify_all();
  hub_.close();
  if (worker_.joinable()) worker_.join();
  if (idle_.joinable()) idle_.join();
}

std::string Controller::add_topology(std::string_view document) {
  topo::Topology t = topo::parse_adjacency(document);
  auto configs = topo::compile_node_configs(t);
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = fmt::format("topo-{}", next_topology_++);
    deployed_ = t;
    topologies_.emplace(id, Stored{std::move(t), std::move(configs)});
    active_ = id;
  }
  hub_.set_active(true);
  cv_.notify_all();
  return id;
}

topo::Topology Controller::topology(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = topologies_.find(id);
  if (it == topologies_.end()) throw NotFound(fmt::format("unknown topology '{}'", id));
  return it->second.topology;
}

std::vector<topo::NodeConfig> Controller::configs(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = topologies_.find(id);
  if (it == topologies_.end()) throw NotFound(fmt::format("unknown topology '{}'", id));
  return it->second.configs;
}

std::optional<std::string> Controller::active_topology() const {
  std::lock_guard lock(mu_);
  return active_;
}

ExperimentHandle Controller::submit_experiment(std::string_view spec_json) {
  std::optional<std::string> topology_id;
  emu::ExperimentSpec spec = emu::parse_experiment_spec(spec_json, [&](const std::string& id) {
    topology_id = id;
    std::lock_guard lock(mu_);
    auto it = topologies_.find(id);
    return it == topologies_.end() ? std::nullopt : std::optional<topo::Topology>(it->second.topology);
  });

  ExperimentHandle h;
  {
    std::lock_guard lock(mu_);
    h.id = fmt::format("exp-{}", next_experiment_++);
    h.spec = std::move(spec);
    h.topology_id = topology_id;
    h.created_at = wall_clock_now();
    jobs_.emplace(h.id, Job{h, std::nullopt});
    queue_.push_back(h.id);
  }
  cv_.notify_all();
  return h;
}

ExperimentHandle Controller::experiment(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFound(fmt::format("unknown experiment '{}'", id));
  return it->second.handle;
}

std::vector<ExperimentHandle> Controller::experiments() const {
  std::lock_guard lock(mu_);
  std::vector<ExperimentHandle> out;
  for (const auto& [id, job] : jobs_) out.push_back(job.handle);
  return out;
}

std::optional<std::vector<eval::RunSummary>> Controller::metrics(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw NotFound(fmt::format("unknown experiment '{}'", id));
  if (it->second.handle.state != ExperimentState::done) return std::nullopt;
  return it->second.summaries;
}

bool Controller::wait(const std::string& id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] {
    auto it = jobs_.find(id);
    return it == jobs_.end() || it->second.handle.state == ExperimentState::done ||
           it->second.handle.state == ExperimentState::failed;
  });
}

void Controller::set_link_state(const std::string& a, const std::string& b, bool up) {
  bool found = false;
  {
    std::lock_guard lock(mu_);
    if (deployed_) {
      const auto ia = deployed_->index_of(a), ib = deployed_->index_of(b);
      if (ia && ib && deployed_->link(*ia, *ib)) {
        deployed_ = deployed_->with_link_state(*ia, *ib, up);
        found = true;
      }
    }
    for (emu::Network* net : live_) {
      const auto ia = net->topology().index_of(a), ib = net->topology().index_of(b);
      if (ia && ib && net->topology().link(*ia, *ib)) {
        net->inject_link_state(*ia, *ib, up);
        found = true;
      }
    }
  }
  if (!found) throw NotFound(fmt::format("no link {}-{}", a, b));
  auto rec = logrepo::make_record(wall_clock_now(), up ? logrepo::Severity::notice : logrepo::Severity::warning,
                                  "controller", "netmg", fmt::format("link {}-{} {}", a, b, up ? "up" : "down"));
  logs_.ingest(std::move(rec), wall_clock_now());
}

void Controller::on_lease(const discovery::LeaseRecord&) {
  std::filesystem::create_directories(options_.data_dir);
  leases_.save(lease_file());
}

discovery::ProvisioningPlan Controller::plan_for(const std::array<std::uint8_t, 6>& mac) const {
  const auto lease = leases_.find(mac);
  if (!lease) throw NotFound(fmt::format("no lease for {}", discovery::format_mac(mac)));
  std::lock_guard lock(mu_);
  if (!active_) throw NotFound("no topology deployed");
  const auto& configs = topologies_.at(*active_).configs;
  const auto base = discovery::parse_ipv4(topo::address_for(0)).value();
  if (lease->ip < base || lease->ip - base >= configs.size()) {
    throw NotFound(fmt::format("no node holds address {}", discovery::format_ipv4(lease->ip)));
  }
  return discovery::emit_provisioning_plan(*lease, configs[lease->ip - base], options_.log_sink);
}

void Controller::worker_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      jobs_.at(id).handle.state = ExperimentState::running;
    }
    cv_.notify_all();
    run_job(id);
    cv_.notify_all();
  }
}

void Controller::run_job(const std::string& id) {
  emu::ExperimentSpec spec;
  {
    std::lock_guard lock(mu_);
    spec = jobs_.at(id).handle.spec;
  }
  hub_.set_active(true);

  emu::RunHooks hooks;
  hooks.started = [this](std::uint32_t, emu::Network& net) {
    std::lock_guard lock(mu_);
    live_.insert(&net);
    if (stopping_) net.request_stop();
  };
  hooks.finished = [this](std::uint32_t, emu::Network& net) {
    std::lock_guard lock(mu_);
    live_.erase(&net);
  };
  hooks.probe_batch = [this, id](std::uint32_t, const emu::ProbeBatch& b) { hub_.publish(id, b.round, b.samples); };

  const auto dir = options_.data_dir / "runs" / id;
  try {
    std::vector<eval::RunSummary> summaries;
    std::vector<emu::ConsumerSummary> consumers;
    emu::for_each_run(
        spec,
        [&](emu::RunOutput&& run) {
          summaries.push_back(eval::summarize_run(spec, run, options_.windows));
          consumers.push_back(run.consumer);
          if (options_.keep_logs) emu::write_run_logs(dir, run);
          std::lock_guard lock(mu_);
          ++jobs_.at(id).handle.completed;
        },
        options_.threads, hooks);
    emu::write_manifest(dir, spec, consumers);
    std::ofstream(dir / "metrics.json", std::ios::binary) << eval::summaries_to_json(summaries) << '\n';
    std::ofstream(dir / "metrics.csv", std::ios::binary) << eval::export_runs_csv(summaries);

    std::lock_guard lock(mu_);
    Job& job = jobs_.at(id);
    job.summaries = std::move(summaries);
    job.handle.state = ExperimentState::done;
  } catch (const std::exception& e) {
    std::lock_guard lock(mu_);
    Job& job = jobs_.at(id);
    job.handle.state = ExperimentState::failed;
    job.handle.error = e.what();
  }
  std::lock_guard lock(mu_);
  hub_.set_active(deployed_.has_value());
}

void Controller::idle_probe_loop() {
  std::uint64_t round = 0;
  std::optional<std::string> probed;  // topology id of the current session
  auto next_due = std::chrono::steady_clock::now();
  std::unique_lock lock(mu_);
  for (;;) {
    cv_.wait_until(lock, next_due, [&] { return stopping_ || active_ != probed; });
    if (stopping_) return;
    if (active_ != probed) {
      // New deployment: restart the session right away.
      probed = active_;
      round = 0;
      next_due = std::chrono::steady_clock::now();
    }
    if (std::chrono::steady_clock::now() < next_due) continue;
    next_due += std::chrono::microseconds(options_.idle_probe_interval);

    const bool experiment_running = std::any_of(jobs_.begin(), jobs_.end(), [](const auto& kv) {
      return kv.second.handle.state == ExperimentState::running;
    });
    if (!deployed_ || experiment_running) continue;
    const topo::Topology t = *deployed_;
    lock.unlock();
    auto samples = emu::probe_link_delays(t);
    hub_.publish("idle", round++, std::move(samples));
    lock.lock();
  }
}

}  // namespace ndntb::api
