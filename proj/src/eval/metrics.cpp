#include "ndntb/eval/metrics.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "ndntb/logrepo/events.hpp"

namespace ndntb::eval {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::throughput_mbps: return "throughput_mbps";
    case Metric::rtt_ms: return "rtt_ms";
    case Metric::link_delay_ms: return "link_delay_ms";
    case Metric::interest_rate: return "interest_rate";
    case Metric::table_sizes: return "table_sizes";
    case Metric::phase_runtime_s: return "phase_runtime_s";
  }
  return "unknown";
}

std::size_t Timeline::bucket_count() const {
  if (duration <= 0) return 0;
  const auto width = static_cast<TimeUs>(std::llround(bucket_s * 1e6));
  return static_cast<std::size_t>((duration + width - 1) / width);
}

namespace {

// Calls fn(bucket, event) for each event logged by `host` inside the run.
template <class Fn>
void for_each_event(const logrepo::LogSnapshot& logs, std::string_view host, const Timeline& t, TimeUs width, Fn fn) {
  for (const logrepo::SyslogRecord& rec : logs.records()) {
    if (rec.host != host) continue;
    const TimeUs rel = rec.received_at - t.origin;
    if (rel < 0 || rel >= t.duration) continue;
    const auto ev = logrepo::parse_event(rec.msg);
    if (!ev) continue;
    fn(static_cast<std::size_t>(rel / width), *ev);
  }
}

TimeUs width_us(double bucket_s) {
  if (!(bucket_s > 0)) throw std::invalid_argument("bucket must be > 0");
  return static_cast<TimeUs>(std::llround(bucket_s * 1e6));
}

MetricSeries dense(Metric m, std::string_view subject, const Timeline& t, const std::vector<double>& values) {
  MetricSeries s{m, std::string(subject), t.bucket_s, {}};
  for (std::size_t i = 0; i < values.size(); ++i) s.points.push_back(Point{static_cast<double>(i) * t.bucket_s, values[i]});
  return s;
}

}  // namespace

MetricSeries compute_throughput(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t) {
  const TimeUs width = width_us(t.bucket_s);
  std::vector<std::uint64_t> bytes(t.bucket_count(), 0);
  for_each_event(logs, node, t, width, [&](std::size_t b, const logrepo::Event& ev) {
    if (auto* d = std::get_if<logrepo::DataEvent>(&ev)) bytes[b] += d->bytes;
  });
  std::vector<double> mbps(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) mbps[i] = static_cast<double>(bytes[i]) * 8.0 / t.bucket_s / 1e6;
  return dense(Metric::throughput_mbps, node, t, mbps);
}

MetricSeries compute_interest_rate(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t) {
  const TimeUs width = width_us(t.bucket_s);
  std::vector<double> rate(t.bucket_count(), 0.0);
  for_each_event(logs, node, t, width, [&](std::size_t b, const logrepo::Event& ev) {
    if (std::holds_alternative<logrepo::InterestEvent>(ev)) rate[b] += 1.0 / t.bucket_s;
  });
  return dense(Metric::interest_rate, node, t, rate);
}

MetricSeries compute_rtt(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t) {
  const TimeUs width = width_us(t.bucket_s);
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for_each_event(logs, node, t, width, [&](std::size_t b, const logrepo::Event& ev) {
    if (auto* r = std::get_if<logrepo::RttEvent>(&ev)) {
      acc[b].first += r->ms;
      ++acc[b].second;
    }
  });
  MetricSeries s{Metric::rtt_ms, std::string(node), t.bucket_s, {}};
  for (const auto& [b, sum] : acc) {
    s.points.push_back(Point{static_cast<double>(b) * t.bucket_s, sum.first / static_cast<double>(sum.second)});
  }
  return s;
}

MetricSeries compute_link_delay(const logrepo::LogSnapshot& logs, std::string_view link, const Timeline& t,
                                TimeUs probe_interval) {
  const double interval_s = us_to_sec(probe_interval);
  MetricSeries s{Metric::link_delay_ms, std::string(link), interval_s, {}};
  const std::size_t rounds =
      t.duration <= 0 ? 0 : static_cast<std::size_t>((t.duration + probe_interval - 1) / probe_interval);
  std::vector<std::optional<double>> value(rounds);
  for (const logrepo::SyslogRecord& rec : logs.records()) {
    const TimeUs rel = rec.received_at - t.origin;
    if (rel < 0 || rel >= t.duration) continue;
    const auto ev = logrepo::parse_event(rec.msg);
    if (!ev) continue;
    auto* p = std::get_if<logrepo::ProbeEvent>(&*ev);
    if (!p || p->link != link) continue;
    const auto round = static_cast<std::size_t>(rel / probe_interval);
    if (p->ms && !value[round]) value[round] = p->ms;
  }
  for (std::size_t k = 0; k < rounds; ++k) s.points.push_back(Point{static_cast<double>(k) * interval_s, value[k]});
  return s;
}

std::vector<MetricSeries> benchmark_series(const emu::BenchmarkReport& r) {
  std::vector<MetricSeries> out;
  for (std::size_t i = 0; i < r.fib_sizes.size(); ++i) {
    out.push_back(MetricSeries{Metric::table_sizes, fmt::format("N{}", i), 0.0,
                               {Point{0.0, static_cast<double>(r.fib_sizes[i])}}});
  }
  const std::pair<const char*, double> phases[] = {{"link_config", r.link_config_ms},
                                                   {"routing", r.routing_ms},
                                                   {"generate", r.generate_ms},
                                                   {"install", r.install_ms},
                                                   {"total", r.total_ms}};
  for (const auto& [name, ms] : phases) {
    out.push_back(MetricSeries{Metric::phase_runtime_s, name, 0.0, {Point{0.0, ms / 1000.0}}});
  }
  return out;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_csv(std::span<const MetricSeries> series) {
  std::string out = "metric,subject,bucket_start,value\n";
  for (const MetricSeries& s : series) {
    const std::string subject = csv_field(s.subject);
    for (const Point& p : s.points) {
      out += fmt::format("{},{},{:.6f},", to_string(s.metric), subject, p.bucket_start);
      if (p.value) out += fmt::format("{:.6f}", *p.value);
      out += '\n';
    }
  }
  return out;
}

}  // namespace ndntb::eval
