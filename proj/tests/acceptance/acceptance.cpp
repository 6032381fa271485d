// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ndntb/discovery/dhcp.hpp"
#include "ndntb/discovery/lease.hpp"
#include "ndntb/emu/apps.hpp"
#include "ndntb/emu/benchmark.hpp"
#include "ndntb/emu/experiment.hpp"
#include "ndntb/emu/network.hpp"
#include "ndntb/eval/summary.hpp"
#include "ndntb/logrepo/events.hpp"
#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/topo/routing.hpp"
#include "support/dhcp_vectors.hpp"
#include "support/fixtures.hpp"
#include "support/graph_oracle.hpp"
#include "support/syslog_gen.hpp"

using namespace ndntb;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool ok = true;
  std::string detail;

  // Keeps the first failure reason.
  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

int failures = 0;
int ran = 0;
std::string only;  // substring filter from argv

void criterion(const char* name, const std::function<Verdict()>& body) {
  if (!only.empty() && std::string(name).find(only) == std::string::npos) return;
  ++ran;
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, fmt::format("exception: {}", e.what())};
  }
  if (!v.ok) ++failures;
  fmt::print("{} {}: {}\n", v.ok ? "PASS" : "FAIL", name, v.detail);
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

Verdict routing_oracle() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t pairs = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 7;  // 2..8 nodes
    const auto t = oracle::random_graph(1000 + seed, n, 0.4, 1, 50);
    const auto fw = oracle::floyd_warshall(t);
    for (const auto& src : t.nodes()) {
      const auto routes = topo::compute_routes(t, src);
      v.require(routes.size() == n - 1, fmt::format("seed {}: {} routes from {}", seed, routes.size(), src.index));
      for (const auto& r : routes) {
        const std::size_t d = t.find(r.destination).index;
        const auto best = oracle::brute_force(t, src.index, d);
        v.require(r.cost == fw[src.index][d] && r.cost == best.cost,
                  fmt::format("seed {} {}->{}: {} vs oracle {}", seed, src.index, d, r.cost, fw[src.index][d]));
        v.require(r.next_hop.index == best.path[1], fmt::format("seed {} {}->{}: next hop", seed, src.index, d));
        ++pairs;
      }
    }
  }
  const double secs = seconds_since(t0);
  v.require(secs < 5.0, fmt::format("took {:.2f} s", secs));
  if (v.ok) v.detail = fmt::format("100 graphs, {} pairs equal Floyd-Warshall and brute force, {:.2f} s", pairs, secs);
  return v;
}

// k consumers behind one router R ask for the same name at the same instant.
Verdict pit_aggregation() {
  Verdict v;
  std::vector<std::string> counts;
  for (std::size_t k : {2u, 5u, 10u}) {
    const std::size_t n = k + 2;  // R, P, C0..C(k-1)
    std::vector<std::string> labels{"R", "P"};
    for (std::size_t i = 0; i < k; ++i) labels.push_back(fmt::format("C{}", i));
    std::vector<std::optional<topo::LinkSpec>> m(n * n);
    auto link = [&](std::size_t a, std::size_t b, double ms) {
      m[a * n + b] = topo::LinkSpec{ms};
      m[b * n + a] = topo::LinkSpec{ms};
    };
    link(0, 1, 5);
    for (std::size_t i = 2; i < n; ++i) link(0, i, 1);
    const auto t = topo::Topology::build(labels, std::move(m));

    emu::NetworkConfig cfg;
    cfg.probe_interval = 0;
    logrepo::LogStore store;
    emu::Network net(t, cfg, store);
    const auto prefix = ndn::Name::parse(topo::name_prefix_for(1));
    net.attach(1, std::make_unique<emu::ProducerApp>(1250), prefix);
    const auto name = prefix.append("obj");
    std::vector<emu::PingApp*> pings;
    for (std::size_t i = 2; i < n; ++i) {
      pings.push_back(static_cast<emu::PingApp*>(
          &net.attach(i, std::make_unique<emu::PingApp>(std::vector<emu::PingApp::Request>{{0, name}}, 7 * i))));
    }
    net.run(kUsPerSec);

    ndn::FaceCounters r;
    for (const auto& f : net.forwarder(0).faces()) {
      const auto& c = net.forwarder(0).counters(f.id);
      r.interest_in += c.interest_in;
      r.interest_out += c.interest_out;
      r.data_out += c.data_out;
    }
    std::size_t at_producer = 0;
    for (const auto& rec : store.snapshot().records()) {
      if (rec.host == "P" && rec.msg.rfind("interest ", 0) == 0) ++at_producer;
    }
    std::size_t delivered = 0;
    for (auto* p : pings) delivered += p->rtts()[0].has_value();
    // R forwards exactly one interest upstream and returns k data packets.
    v.require(r.interest_in == k, fmt::format("k={}: R received {} interests", k, r.interest_in));
    v.require(r.interest_out == 1, fmt::format("k={}: R sent {} upstream", k, r.interest_out));
    v.require(at_producer == 1, fmt::format("k={}: producer saw {} interests", k, at_producer));
    v.require(r.data_out == k && delivered == k, fmt::format("k={}: {} data out, {} delivered", k, r.data_out, delivered));
    counts.push_back(fmt::format("k={} -> 1 up/{} down", k, delivered));
  }
  if (v.ok) v.detail = fmt::format("{}, {}, {}", counts[0], counts[1], counts[2]);
  return v;
}

emu::ExperimentSpec canonical(ndn::Strategy s, std::uint32_t reps, std::uint64_t seed) {
  emu::ExperimentSpec spec;
  spec.topology = fixtures::diamond();
  spec.consumer = *spec.topology.index_of("C0");
  spec.producer = *spec.topology.index_of("P1");
  spec.strategy = s;
  spec.demand_rate_mbps = 20;
  spec.payload_size = 1250;
  spec.duration = 16 * kUsPerSec;
  spec.failures.push_back({*spec.topology.index_of("R3"), *spec.topology.index_of("R4"), 8 * kUsPerSec, false});
  spec.repetitions = reps;
  spec.seed = seed;
  return spec;
}

// Goodput per whole second straight from consumer "data" records.
std::vector<double> goodput(const emu::RunOutput& run, const std::string& host) {
  std::vector<double> mbps(static_cast<std::size_t>(std::ceil(us_to_sec(run.duration))), 0.0);
  for (const auto& rec : run.logs->snapshot().records()) {
    if (rec.host != host) continue;
    const auto ev = logrepo::parse_event(rec.msg);
    if (!ev) continue;
    if (const auto* d = std::get_if<logrepo::DataEvent>(&*ev)) {
      mbps.at(static_cast<std::size_t>((rec.received_at - run.epoch) / kUsPerSec)) += d->bytes * 8 / 1e6;
    }
  }
  return mbps;
}

Verdict link_failure() {
  Verdict v;
  const auto t0 = Clock::now();
  std::string summary;
  for (auto s : {ndn::Strategy::best_route, ndn::Strategy::multicast}) {
    const bool collapse = s == ndn::Strategy::best_route;
    double worst = collapse ? 0.0 : 1e9;
    double sum_ratio = 0;
    std::uint32_t reps = 0;
    emu::for_each_run(canonical(s, 20, 1), [&](emu::RunOutput&& run) {
      const auto g = goodput(run, "C0");
      const double before = (g[6] + g[7]) / 2, after = (g[8] + g[9]) / 2;
      const double ratio = before > 0 ? after / before : 0.0;
      v.require(before > 0, fmt::format("{} rep {}: no goodput before the failure", ndn::to_string(s), run.repetition));
      v.require(collapse ? ratio <= 0.2 : ratio >= 0.8,
                fmt::format("{} rep {}: after/before = {:.3f}", ndn::to_string(s), run.repetition, ratio));
      worst = collapse ? std::max(worst, ratio) : std::min(worst, ratio);
      sum_ratio += ratio;
      ++reps;
    });
    v.require(reps == 20, fmt::format("{}: {} repetitions", ndn::to_string(s), reps));
    summary += fmt::format("{} mean ratio {:.3f} (worst {:.3f}); ", ndn::to_string(s), sum_ratio / reps, worst);
  }
  const double secs = seconds_since(t0);
  v.require(secs < 60.0, fmt::format("took {:.1f} s", secs));
  if (v.ok) v.detail = summary + fmt::format("2 x 20 reps in {:.1f} s", secs);
  return v;
}

Verdict determinism() {
  Verdict v;
  const std::vector<eval::Window> windows{{6, 8}, {8, 10}};
  std::size_t bytes = 0;
  for (auto s : {ndn::Strategy::best_route, ndn::Strategy::multicast}) {
    const auto spec = canonical(s, 3, 42);
    const auto a = eval::export_runs_csv(eval::evaluate_experiment(spec, windows, 1.0, 1));
    const auto b = eval::export_runs_csv(eval::evaluate_experiment(spec, windows, 1.0, 0));
    v.require(!a.empty() && a == b, fmt::format("{}: CSV exports differ", ndn::to_string(s)));
    bytes += a.size();
  }
  if (v.ok) v.detail = fmt::format("identical specs gave byte-identical CSV ({} bytes, serial vs parallel)", bytes);
  return v;
}

Verdict syslog_robustness() {
  Verdict v;
  std::mt19937_64 rng(20240101);
  for (int i = 0; i < 1000; ++i) {
    const std::string line = gen::canonical_line(rng);
    try {
      const auto back = logrepo::format_syslog(logrepo::parse_syslog(line));
      v.require(back == line, fmt::format("round trip changed: {}", line));
    } catch (const std::exception& e) {
      v.require(false, fmt::format("canonical line rejected ({}): {}", e.what(), line));
    }
  }
  logrepo::LogStore store;
  std::size_t parsed = 0;
  const std::size_t cases = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    std::string bytes;
    if (i % 4 == 0) {
      // Canonical line with a few random byte flips, so both paths get exercised.
      bytes = gen::canonical_line(rng);
      for (std::uint64_t f = rng() % 3; f > 0; --f) bytes[rng() % bytes.size()] = static_cast<char>(rng() & 0xff);
    } else {
      bytes.resize(rng() % 200);
      for (auto& b : bytes) b = static_cast<char>(rng() & 0xff);
      if (i % 4 == 1) bytes = "<" + std::to_string(rng() % 256) + ">1 " + bytes;
    }
    parsed += store.ingest_line(bytes, "10.0.0.99", static_cast<TimeUs>(i));
  }
  v.require(store.total_received() == cases, fmt::format("{} received", store.total_received()));
  v.require(store.size() + store.quarantined() == cases,
            fmt::format("{} parsed + {} quarantined != {}", store.size(), store.quarantined(), cases));
  v.require(store.size() == parsed, "parsed count mismatch");
  if (v.ok) {
    v.detail = fmt::format("1000 canonical lines round-trip; fuzz {} = {} parsed + {} quarantined", cases, store.size(),
                           store.quarantined());
  }
  return v;
}

Verdict dhcp_option60() {
  Verdict v;
  discovery::LeaseRegistry registry;
  const struct {
    const std::uint8_t* mac;
    const char* vci;
    discovery::OsType want;
  } cases[] = {{vectors::kMacA, "ubuntu", discovery::OsType::ubuntu},
               {vectors::kMacB, "mac", discovery::OsType::mac},
               {vectors::kMacC, "pi", discovery::OsType::pi}};
  for (const auto& c : cases) {
    const auto bytes = vectors::discover(c.mac, c.vci);
    const auto msg = discovery::parse_dhcp_message(bytes);
    v.require(msg.vendor_class() == c.vci, fmt::format("vci '{}' read as '{}'", c.vci, msg.vendor_class()));
    const auto lease = registry.handle_discover(msg, kEmulationEpochUs);
    v.require(lease.os_type == c.want, fmt::format("vci '{}' mapped to {}", c.vci, to_string(lease.os_type)));
  }
  const struct {
    const char* name;
    vectors::Bytes bytes;
    discovery::DhcpErrc want;
  } bad[] = {{"truncated option 60", vectors::truncated_vci(), discovery::DhcpErrc::truncated_option},
             {"missing length byte", vectors::truncated_length(), discovery::DhcpErrc::truncated_option},
             {"no end option", vectors::no_terminator(), discovery::DhcpErrc::missing_terminator},
             {"bad magic cookie", vectors::no_cookie(), discovery::DhcpErrc::missing_cookie}};
  for (const auto& b : bad) {
    try {
      discovery::parse_dhcp_message(b.bytes);
      v.require(false, fmt::format("{}: accepted", b.name));
    } catch (const discovery::DhcpParseError& e) {
      v.require(e.kind() == b.want, fmt::format("{}: got {}", b.name, to_string(e.kind())));
    }
  }
  if (v.ok) v.detail = "ubuntu/mac/pi -> ubuntu/mac/pi; 4 malformed vectors -> typed errors";
  return v;
}

Verdict prefix_scaling() {
  Verdict v;
  auto best_of = [&](std::size_t count, int tries) {
    emu::BenchmarkReport best;
    for (int i = 0; i < tries; ++i) {
      auto r = emu::benchmark_prefix_install(10, count);
      for (std::size_t s : r.fib_sizes) {
        v.require(s == 9 * count, fmt::format("{} prefixes: FIB size {} != {}", count, s, 9 * count));
      }
      v.require(r.fib_sizes.size() == 10, "expected 10 nodes");
      if (i == 0 || r.total_ms < best.total_ms) best = std::move(r);
    }
    return best;
  };
  const auto small = best_of(1000, 3);
  const auto large = best_of(10000, 3);
  const double ratio = large.total_ms / small.total_ms;
  v.require(large.total_ms < 60000, fmt::format("10k install took {:.0f} ms", large.total_ms));
  v.require(ratio <= 15.0, fmt::format("10k/1k time ratio {:.2f}", ratio));
  if (v.ok) {
    v.detail = fmt::format("1k {:.1f} ms, 10k {:.1f} ms, ratio {:.2f}; FIB 9x count on all 10 nodes", small.total_ms,
                           large.total_ms, ratio);
  }
  return v;
}

Verdict rtt_sanity() {
  Verdict v;
  const auto t = fixtures::diamond();
  const std::size_t c0 = *t.index_of("C0"), p1 = *t.index_of("P1");
  // Shortest C0->P1 path cost from the oracle; RTT is twice that.
  const double expected = 2 * oracle::floyd_warshall(t)[c0][p1];
  const double expected_hit = 2 * t.link(c0, *t.index_of("R1"))->delay_ms;

  emu::NetworkConfig cfg;
  cfg.cs_capacity_overrides = {{c0, 0}};  // repeats are answered by R1's store
  logrepo::LogStore store;
  emu::Network net(t, cfg, store);
  const auto prefix = ndn::Name::parse(topo::name_prefix_for(p1));
  net.attach(p1, std::make_unique<emu::ProducerApp>(1250), prefix);
  std::vector<emu::PingApp::Request> reqs;
  for (int i = 0; i < 20; ++i) reqs.push_back({i * 100 * kUsPerMs, prefix.append("fresh").append(std::to_string(i))});
  for (int i = 0; i < 20; ++i) reqs.push_back({(3000 + i * 100) * kUsPerMs, prefix.append("fresh").append(std::to_string(i))});
  auto& ping = static_cast<emu::PingApp&>(net.attach(c0, std::make_unique<emu::PingApp>(reqs, 3)));
  net.run(6 * kUsPerSec);

  double fresh = 0, hit = 0;
  for (int i = 0; i < 40; ++i) {
    const auto& r = ping.rtts()[static_cast<std::size_t>(i)];
    v.require(r.has_value(), fmt::format("request {} unanswered", i));
    if (r) (i < 20 ? fresh : hit) += *r;
  }
  fresh /= 20;
  hit /= 20;
  v.require(std::abs(fresh - 24.0) <= 1.0 && std::abs(fresh - expected) <= 1.0,
            fmt::format("uncontended mean {:.3f} ms (expected {:.1f})", fresh, expected));
  v.require(std::abs(hit - 2.0) <= 1.0 && std::abs(hit - expected_hit) <= 1.0,
            fmt::format("cache-hit mean {:.3f} ms (expected {:.1f})", hit, expected_hit));
  if (v.ok) v.detail = fmt::format("uncontended {:.3f} ms, cache hit {:.3f} ms", fresh, hit);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = argv[1];
  criterion("routing oracle equivalence", routing_oracle);
  criterion("PIT aggregation", pit_aggregation);
  criterion("link-failure reproduction", link_failure);
  criterion("determinism", determinism);
  criterion("syslog round-trip and robustness", syslog_robustness);
  criterion("DHCP option 60", dhcp_option60);
  criterion("prefix-scaling benchmark", prefix_scaling);
  criterion("RTT sanity", rtt_sanity);
  fmt::print("{} of {} criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
