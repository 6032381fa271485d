#include "ndntb/emu/network.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

#include "ndntb/logrepo/events.hpp"

namespace ndntb::emu {

using logrepo::Severity;

void App::on_interest(Network&, const ndn::Interest&, TimeUs) {}
void App::on_data(Network&, const ndn::Data&, TimeUs) {}
void App::on_timer(Network&, std::uint64_t, std::uint64_t, TimeUs) {}

EventKind Event::kind() const {
  switch (payload.index()) {
    case 0: return EventKind::packet_arrival;
    case 1: return EventKind::app_timer;
    case 2: return EventKind::probe_timer;
    case 3: return EventKind::probe_reply;
    case 4: return EventKind::failure;
    case 5: return EventKind::pit_sweep;
    default: return EventKind::experiment_end;
  }
}

namespace {
struct Later {
  bool operator()(const Event& x, const Event& y) const { return x.at != y.at ? x.at > y.at : x.seq > y.seq; }
};
}  // namespace

void EventQueue::push(TimeUs at, EventPayload payload) {
  heap_.push_back(Event{at, next_seq_++, std::move(payload)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

Event EventQueue::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  return ev;
}

Network::Network(const topo::Topology& topology, NetworkConfig config, logrepo::LogStore& logs)
    : topology_(topology), config_(std::move(config)), logs_(logs) {
  const std::size_t n = topology_.node_count();
  link_lookup_.assign(n * n, 0);
  for (const topo::LinkKey& key : topology_.links()) {
    LinkRuntime l;
    l.key = key;
    l.spec = *topology_.link(key.a, key.b);
    l.delay = ms_to_us(l.spec.delay_ms);
    l.name = fmt::format("{}-{}", topology_.node(key.a).label, topology_.node(key.b).label);
    links_.push_back(std::move(l));
    link_lookup_[key.a * n + key.b] = links_.size();
    link_lookup_[key.b * n + key.a] = links_.size();
  }

  forwarders_.reserve(n);
  bindings_.resize(n);
  for (const topo::NodeId& node : topology_.nodes()) {
    addresses_.push_back(topo::address_for(node.index));
    ndn::ForwarderConfig fc{config_.strategy, config_.pit_lifetime, config_.cs_capacity};
    for (const auto& [idx, cap] : config_.cs_capacity_overrides) {
      if (idx == node.index) fc.cs_capacity = cap;
    }
    forwarders_.emplace_back(node, fc);
  }

  // Faces are created in neighbor-index order, so face ids and neighbor
  // indices sort the same way.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : topology_.neighbors(u)) {
      const auto kind =
          topology_.link(u, v)->medium == topo::Medium::wired ? ndn::FaceKind::ethernet : ndn::FaceKind::udp;
      forwarders_[u].add_face(topology_.node(v).label, kind);
      FaceBinding b;
      b.link = link_lookup_[u * n + v] - 1;
      b.remote = v;
      bindings_[u].push_back(b);
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t f = 0; f < bindings_[u].size(); ++f) {
      FaceBinding& b = bindings_[u][f];
      const auto& peer = bindings_[b.remote];
      for (std::size_t g = 0; g < peer.size(); ++g) {
        if (!peer[g].is_app && peer[g].remote == u) b.remote_face = ndn::FaceId{static_cast<std::uint32_t>(g)};
      }
    }
  }
  install_routes();
}

void Network::install_routes() {
  multipath_ = topo::compile_multipath(topology_);
  for (std::size_t v = 0; v < topology_.node_count(); ++v) announce(ndn::Name::parse(topo::name_prefix_for(v)), v);
}

void Network::announce(const ndn::Name& prefix, std::size_t owner) {
  for (std::size_t u = 0; u < multipath_.size(); ++u) {
    for (const topo::MultipathRoute& route : multipath_[u]) {
      if (route.destination != owner) continue;
      for (const topo::NextHop& hop : route.next_hops) {
        for (std::size_t f = 0; f < bindings_[u].size(); ++f) {
          if (!bindings_[u][f].is_app && bindings_[u][f].remote == hop.neighbor) {
            forwarders_[u].add_route(prefix, ndn::FaceId{static_cast<std::uint32_t>(f)}, hop.cost);
          }
        }
      }
    }
  }
}

std::size_t Network::link_index(std::size_t a, std::size_t b) const {
  const std::size_t n = topology_.node_count();
  if (a >= n || b >= n || link_lookup_[a * n + b] == 0) {
    throw topo::TopologyError(topo::TopoErrc::no_such_link, fmt::format("no link between node {} and {}", a, b));
  }
  return link_lookup_[a * n + b] - 1;
}

App& Network::attach(std::size_t node, std::unique_ptr<App> app, const std::optional<ndn::Name>& prefix) {
  ndn::Forwarder& fwd = forwarders_.at(node);
  const ndn::FaceId face = fwd.add_face(fmt::format("app{}", apps_.size()), ndn::FaceKind::app);
  FaceBinding b;
  b.is_app = true;
  b.app = apps_.size();
  bindings_[node].push_back(b);
  app->node_ = node;
  app->face_ = face;
  app->id_ = apps_.size();
  if (prefix) fwd.add_route(*prefix, face, 0.0);
  apps_.push_back(std::move(app));
  return *apps_.back();
}

void Network::schedule_link_state(std::size_t a, std::size_t b, bool up, TimeUs at) {
  queue_.push(at, LinkStateChange{link_index(a, b), up});
}

void Network::inject_link_state(std::size_t a, std::size_t b, bool up) {
  const std::size_t link = link_index(a, b);
  std::lock_guard lock(inject_mu_);
  injected_.push_back(LinkStateChange{link, up});
  has_injected_ = true;
}

void Network::schedule_timer(const App& app, TimeUs at, std::uint64_t a, std::uint64_t b) {
  queue_.push(at, AppTimer{app.id(), a, b});
}

void Network::express_interest(const App& app, const ndn::Interest& interest) {
  deliver_interest(app.node(), app.face(), interest);
}

void Network::put_data(const App& app, const ndn::Data& data) { deliver_data(app.node(), app.face(), data); }

void Network::log(std::size_t node, Severity severity, std::string app, std::string msg) {
  auto rec = logrepo::make_record(config_.epoch + now_, severity, topology_.node(node).label, std::move(app),
                                  std::move(msg));
  rec.source_addr = addresses_[node];
  logs_.ingest(std::move(rec), config_.epoch + now_);
}

void Network::log_controller(Severity severity, std::string app, std::string msg) {
  auto rec = logrepo::make_record(config_.epoch + now_, severity, "controller", std::move(app), std::move(msg));
  rec.source_addr = kControllerAddress;
  logs_.ingest(std::move(rec), config_.epoch + now_);
}

void Network::deliver_interest(std::size_t node, ndn::FaceId face, const ndn::Interest& interest) {
  ndn::InterestResult res = forwarders_[node].on_interest(interest, face, now_);
  for (auto& [out, pkt] : res.interests) transmit(node, out, std::move(pkt));
  for (auto& [out, pkt] : res.data) transmit(node, out, std::move(pkt));
  if (res.outcome == ndn::InterestOutcome::unroutable || res.outcome == ndn::InterestOutcome::no_eligible_face ||
      res.outcome == ndn::InterestOutcome::hop_limit_exhausted) {
    log(node, Severity::debug, "nfd", fmt::format("drop {} {}", to_string(res.outcome), interest.name.uri()));
  }
}

void Network::deliver_data(std::size_t node, ndn::FaceId face, const ndn::Data& data) {
  ndn::DataResult res = forwarders_[node].on_data(data, face, now_);
  for (auto& [out, pkt] : res.data) transmit(node, out, std::move(pkt));
}

void Network::transmit(std::size_t node, ndn::FaceId face, std::variant<ndn::Interest, ndn::Data> packet) {
  const FaceBinding& b = bindings_[node].at(face.value);
  if (b.is_app) {
    App& app = *apps_[b.app];
    if (auto* i = std::get_if<ndn::Interest>(&packet)) {
      app.on_interest(*this, *i, now_);
    } else {
      app.on_data(*this, std::get<ndn::Data>(packet), now_);
    }
    return;
  }
  ++stats_.packets_sent;
  LinkRuntime& link = links_[b.link];
  if (!link.spec.up) {
    ++link.dropped;
    ++stats_.packets_dropped;
    return;
  }
  queue_.push(now_ + link.delay, PacketArrival{b.link, link.epoch, b.remote, b.remote_face, std::move(packet)});
}

void Network::apply_link_state(std::size_t link, bool up) {
  LinkRuntime& l = links_[link];
  if (l.spec.up == up) return;
  l.spec.up = up;
  ++l.epoch;
  log_controller(up ? Severity::notice : Severity::warning, "netmg",
                 fmt::format("link {} {}", l.name, up ? "up" : "down"));
}

void Network::run_probe_round() {
  const std::uint64_t round = next_round_++;
  OpenRound open;
  open.batch.round = round;
  open.batch.at = now_;
  open.batch.samples.resize(links_.size());
  open.pending = links_.size();
  open_rounds_.push_back(std::move(open));
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const LinkRuntime& l = links_[i];
    if (l.spec.up) {
      queue_.push(now_ + 2 * l.delay, ProbeReply{round, i, l.epoch, now_});
    } else {
      log_controller(Severity::notice, "probe", logrepo::format_event(logrepo::ProbeEvent{l.name, std::nullopt}));
      record_probe(round, i, std::nullopt);
    }
  }
  queue_.push(now_ + config_.probe_interval, ProbeTimer{});
}

void Network::record_probe(std::uint64_t round, std::size_t link, std::optional<double> ms) {
  for (auto it = open_rounds_.begin(); it != open_rounds_.end(); ++it) {
    if (it->batch.round != round) continue;
    it->batch.samples[link] = ProbeSample{links_[link].name, ms};
    if (--it->pending == 0) {
      if (config_.on_probe_batch) config_.on_probe_batch(it->batch);
      open_rounds_.erase(it);
    }
    return;
  }
}

void Network::drain_injections() {
  std::vector<LinkStateChange> pending;
  {
    std::lock_guard lock(inject_mu_);
    pending.swap(injected_);
    has_injected_ = false;
  }
  for (const auto& c : pending) apply_link_state(c.link, c.up);
}

void Network::dispatch(Event& ev) {
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PacketArrival>) {
          LinkRuntime& link = links_[p.link];
          if (p.epoch != link.epoch || !link.spec.up) {
            ++link.dropped;
            ++stats_.packets_dropped;
            return;
          }
          ++stats_.packets_delivered;
          if (auto* i = std::get_if<ndn::Interest>(&p.packet)) {
            deliver_interest(p.to_node, p.face, *i);
          } else {
            deliver_data(p.to_node, p.face, std::get<ndn::Data>(p.packet));
          }
        } else if constexpr (std::is_same_v<T, AppTimer>) {
          apps_[p.app]->on_timer(*this, p.a, p.b, now_);
        } else if constexpr (std::is_same_v<T, ProbeTimer>) {
          run_probe_round();
        } else if constexpr (std::is_same_v<T, ProbeReply>) {
          const LinkRuntime& l = links_[p.link];
          const bool ok = p.epoch == l.epoch && l.spec.up;
          const auto ms = ok ? std::optional<double>(us_to_ms(now_ - p.sent_at)) : std::nullopt;
          log_controller(Severity::notice, "probe", logrepo::format_event(logrepo::ProbeEvent{l.name, ms}));
          record_probe(p.round, p.link, ms);
        } else if constexpr (std::is_same_v<T, LinkStateChange>) {
          apply_link_state(p.link, p.up);
        } else if constexpr (std::is_same_v<T, PitSweep>) {
          for (auto& f : forwarders_) f.pit_sweep(now_);
          queue_.push(now_ + kPitSweepInterval, PitSweep{});
        }
      },
      ev.payload);
}

void Network::wait_until(TimeUs at, std::chrono::steady_clock::time_point wall_origin) {
  using namespace std::chrono;
  for (;;) {
    const auto elapsed = duration_cast<microseconds>(steady_clock::now() - wall_origin).count();
    if (has_injected_.load(std::memory_order_relaxed)) {
      // Injected changes take effect at the wall-clock moment they arrived.
      now_ = std::clamp<TimeUs>(elapsed, now_, at);
      drain_injections();
    }
    if (elapsed >= at || stop_requested_) return;
    std::this_thread::sleep_for(microseconds(std::min<TimeUs>(at - elapsed, 20 * kUsPerMs)));
  }
}

void Network::run(TimeUs end) {
  if (end <= 0) return;
  now_ = 0;
  for (auto& app : apps_) app->start(*this, 0);
  if (config_.probe_interval > 0) queue_.push(0, ProbeTimer{});
  queue_.push(kPitSweepInterval, PitSweep{});
  queue_.push(end, ExperimentEnd{});

  const auto wall_origin = std::chrono::steady_clock::now();
  while (!queue_.empty() && !stop_requested_) {
    if (config_.realtime) wait_until(std::min(queue_.top().at, end), wall_origin);
    if (has_injected_.load(std::memory_order_relaxed)) drain_injections();
    Event ev = queue_.pop();
    ++stats_.events;
    if (ev.at >= end || std::holds_alternative<ExperimentEnd>(ev.payload)) {
      now_ = end;
      break;
    }
    now_ = ev.at;
    dispatch(ev);
  }

  for (std::size_t u = 0; u < forwarders_.size(); ++u) {
    const ndn::Forwarder& f = forwarders_[u];
    ndn::FaceCounters sum;
    for (const ndn::Face& face : f.faces()) {
      const auto& c = f.counters(face.id);
      sum.interest_in += c.interest_in;
      sum.interest_out += c.interest_out;
      sum.data_in += c.data_in;
      sum.data_out += c.data_out;
    }
    const auto& nc = f.counters();
    log(u, Severity::info, "nfd",
        fmt::format("counters interest_in={} interest_out={} data_in={} data_out={} cs_hits={} aggregated={} "
                    "duplicate={} unroutable={} unsolicited={} pit_timeouts={} fib={} pit={} cs={}",
                    sum.interest_in, sum.interest_out, sum.data_in, sum.data_out, nc.cs_hits, nc.aggregated,
                    nc.duplicate_nonce, nc.unroutable, nc.unsolicited_data, nc.pit_timeouts, f.fib().size(),
                    f.pit().size(), f.cs().size()));
  }
}

}  // namespace ndntb::emu
