// testbedctl: controller daemon plus offline helpers (routes, runs, benchmarks).
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ndntb/api/controller.hpp"
#include "ndntb/api/http_server.hpp"
#include "ndntb/discovery/dhcp_listener.hpp"
#include "ndntb/emu/benchmark.hpp"
#include "ndntb/emu/experiment.hpp"
#include "ndntb/eval/metrics.hpp"
#include "ndntb/eval/summary.hpp"
#include "ndntb/logrepo/syslog_listener.hpp"
#include "ndntb/topo/routing.hpp"

using namespace ndntb;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// "6:8" -> {6, 8}
eval::Window parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected START:END");
  eval::Window w{std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  if (!(w.end_s > w.start_s)) throw CLI::ValidationError("--window", "END must exceed START");
  return w;
}

struct ServeOptions {
  std::string bind = "0.0.0.0";
  std::uint16_t http_port = 8080;
  std::uint16_t syslog_port = logrepo::kDefaultSyslogPort;
  std::uint16_t dhcp_port = discovery::kDefaultDhcpPort;
  std::string data_dir = "data";
  std::int64_t probe_interval_ms = 5000;
  unsigned threads = 0;
};

int serve(const ServeOptions& o) {
  // Block termination signals before any thread starts so only sigwait sees them.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  api::ControllerOptions copt;
  copt.data_dir = o.data_dir;
  copt.idle_probe_interval = o.probe_interval_ms * kUsPerMs;
  copt.threads = o.threads;
  copt.log_sink = fmt::format("10.0.0.1:{}", o.syslog_port);
  api::Controller controller(copt);

  logrepo::SyslogListener syslog(controller.logs(), o.bind, o.syslog_port);
  discovery::DhcpListener dhcp(controller.leases(), o.bind, o.dhcp_port,
                               [&controller](const discovery::LeaseRecord& l) { controller.on_lease(l); });
  api::HttpServer http(controller);
  const auto port = http.bind(o.bind, o.http_port);
  http.start();
  fmt::print(stderr, "listening: http {}:{}, syslog udp {}, dhcp udp {}, data {}\n", o.bind, port, syslog.port(),
             dhcp.port(), o.data_dir);

  int sig = 0;
  sigwait(&sigs, &sig);
  fmt::print(stderr, "signal {}, shutting down\n", sig);
  http.stop();
  dhcp.stop();
  syslog.stop();
  controller.shutdown();
  return 0;
}

int routes(const std::string& path) {
  const auto topology = topo::parse_adjacency(slurp(path));
  std::cout << api::configs_to_json(topo::compile_node_configs(topology)) << '\n';
  return 0;
}

int probe(const std::string& path) {
  const auto topology = topo::parse_adjacency(slurp(path));
  for (const auto& s : emu::probe_link_delays(topology)) {
    fmt::print("{} {}\n", s.link, s.ms ? fmt::format("{:.3f}", *s.ms) : std::string("loss"));
  }
  return 0;
}

int run(const std::string& spec_path, const std::filesystem::path& out, const std::vector<std::string>& windows,
        unsigned threads, bool keep_logs) {
  const auto spec = emu::parse_experiment_spec(slurp(spec_path));
  std::vector<eval::Window> ws;
  for (const auto& w : windows) ws.push_back(parse_window(w));
  if (ws.empty()) ws = {{6, 8}, {8, 10}};

  std::filesystem::create_directories(out);
  std::vector<eval::RunSummary> summaries;
  std::vector<emu::ConsumerSummary> consumers;
  emu::for_each_run(
      spec,
      [&](emu::RunOutput&& r) {
        if (keep_logs) emu::write_run_logs(out, r);
        summaries.push_back(eval::summarize_run(spec, r, ws));
        consumers.push_back(r.consumer);
        fmt::print(stderr, "rep {:>3} seed {:>6}: received {} timeouts {} final window {:.1f}\n", r.repetition, r.seed,
                   r.consumer.received, r.consumer.timeouts, r.consumer.final_window);
      },
      threads);
  emu::write_manifest(out, spec, consumers);
  spit(out / "metrics.json", eval::summaries_to_json(summaries));
  spit(out / "metrics.csv", eval::export_runs_csv(summaries));

  const auto doc = nlohmann::json::parse(eval::summaries_to_json(summaries));
  for (const auto& a : doc.at("aggregates")) {
    const auto head = fmt::format("{:<16} {:<10} ({}, {}]", a.at("metric").get<std::string>(),
                                  a.at("subject").get<std::string>(), a.at("window")[0].get<double>(),
                                  a.at("window")[1].get<double>());
    if (a.at("n").get<std::size_t>() == 0) {
      fmt::print("{} no samples\n", head);
    } else {
      fmt::print("{} mean {:.3f} stddev {:.3f} over {} runs\n", head, a.at("mean").get<double>(),
                 a.at("stddev").get<double>(), a.at("n").get<std::size_t>());
    }
  }
  return 0;
}

int bench(std::size_t nodes, const std::vector<std::size_t>& counts, const std::string& csv) {
  std::vector<eval::MetricSeries> series;
  for (auto count : counts) {
    const auto r = emu::benchmark_prefix_install(nodes, count);
    fmt::print("{} nodes x {} prefixes: link config {:.1f} ms, routing {:.1f} ms, generate {:.1f} ms, install {:.1f} ms, "
               "total {:.1f} ms, fib/node {}\n",
               r.node_count, r.prefixes_per_node, r.link_config_ms, r.routing_ms, r.generate_ms, r.install_ms,
               r.total_ms, r.fib_sizes.empty() ? 0 : r.fib_sizes.front());
    auto s = eval::benchmark_series(r);
    series.insert(series.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  if (!csv.empty()) spit(csv, eval::export_csv(series));
  return 0;
}

// One line per input: canonical form, or "! kind: reason".
int syslog_parse(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::size_t ok = 0, bad = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      std::cout << logrepo::format_syslog(logrepo::parse_syslog(line)) << '\n';
      ++ok;
    } catch (const logrepo::SyslogParseError& e) {
      std::cout << "! " << to_string(e.kind()) << ": " << e.what() << '\n';
      ++bad;
    }
  }
  fmt::print(stderr, "{} parsed, {} quarantined\n", ok, bad);
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NDN testbed controller"};
  app.require_subcommand(1);

  ServeOptions so;
  auto* serve_cmd = app.add_subcommand("serve", "run the controller: HTTP API, syslog and DHCP listeners");
  serve_cmd->add_option("--bind", so.bind, "bind address")->envname("NDNTB_BIND")->capture_default_str();
  serve_cmd->add_option("--http-port", so.http_port, "HTTP port")->envname("NDNTB_HTTP_PORT")->capture_default_str();
  serve_cmd->add_option("--syslog-port", so.syslog_port, "syslog UDP port")
      ->envname("NDNTB_SYSLOG_PORT")
      ->capture_default_str();
  serve_cmd->add_option("--dhcp-port", so.dhcp_port, "DHCP UDP port")->envname("NDNTB_DHCP_PORT")->capture_default_str();
  serve_cmd->add_option("--data-dir", so.data_dir, "lease file and experiment output")
      ->envname("NDNTB_DATA_DIR")
      ->capture_default_str();
  serve_cmd->add_option("--probe-interval-ms", so.probe_interval_ms, "idle link probe period")
      ->envname("NDNTB_PROBE_INTERVAL_MS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--threads", so.threads, "emulation workers (0 = all cores)")->envname("NDNTB_THREADS");

  std::string topo_path;
  auto* routes_cmd = app.add_subcommand("routes", "print per-node configs for an adjacency document");
  routes_cmd->add_option("topology", topo_path, "adjacency JSON file, or -")->required();

  auto* probe_cmd = app.add_subcommand("probe", "one probe round over a topology");
  probe_cmd->add_option("topology", topo_path, "adjacency JSON file, or -")->required();

  std::string spec_path;
  std::string out_dir = "run";
  std::vector<std::string> windows;
  unsigned run_threads = 0;
  bool no_logs = false;
  auto* run_cmd = app.add_subcommand("run", "run an experiment spec offline");
  run_cmd->add_option("spec", spec_path, "experiment JSON file, or -")->required();
  run_cmd->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
  run_cmd->add_option("--window", windows, "aggregate window START:END in seconds (repeatable)");
  run_cmd->add_option("--threads", run_threads, "workers (0 = all cores)");
  run_cmd->add_flag("--no-logs", no_logs, "skip per-host log files");

  std::size_t nodes = 10;
  std::vector<std::size_t> counts{1000, 10000};
  std::string bench_csv;
  auto* bench_cmd = app.add_subcommand("bench", "prefix installation benchmark");
  bench_cmd->add_option("--nodes", nodes, "ring size")->check(CLI::Range(2, 1000))->capture_default_str();
  bench_cmd->add_option("--prefixes", counts, "prefixes per node (repeatable)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", bench_csv, "write series CSV here");

  std::string log_path = "-";
  auto* syslog_cmd = app.add_subcommand("syslog-parse", "parse syslog lines and print their canonical form");
  syslog_cmd->add_option("file", log_path, "input file, or - for stdin")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(so);
    if (*routes_cmd) return routes(topo_path);
    if (*probe_cmd) return probe(topo_path);
    if (*run_cmd) return run(spec_path, out_dir, windows, run_threads, !no_logs);
    if (*bench_cmd) return bench(nodes, counts, bench_csv);
    if (*syslog_cmd) return syslog_parse(log_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
