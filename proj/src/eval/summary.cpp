#include "ndntb/eval/summary.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ndntb::eval {

using nlohmann::ordered_json;

Aggregate aggregate(const MetricSeries& s, const Window& w) {
  Aggregate a{s.metric, s.subject, w, 0, 0.0, 0.0};
  double sum = 0;
  for (const Point& p : s.points) {
    if (!p.value || p.bucket_start < w.start_s || p.bucket_start >= w.end_s) continue;
    sum += *p.value;
    ++a.n;
  }
  if (a.n == 0) return a;
  a.mean = sum / static_cast<double>(a.n);
  double sq = 0;
  for (const Point& p : s.points) {
    if (!p.value || p.bucket_start < w.start_s || p.bucket_start >= w.end_s) continue;
    sq += (*p.value - a.mean) * (*p.value - a.mean);
  }
  a.stddev = std::sqrt(sq / static_cast<double>(a.n));
  return a;
}

std::vector<Aggregate> aggregate_all(const std::vector<MetricSeries>& series, const std::vector<Window>& windows) {
  std::vector<Aggregate> out;
  for (const MetricSeries& s : series) {
    for (const Window& w : windows) out.push_back(aggregate(s, w));
  }
  return out;
}

RunSummary summarize_run(const emu::ExperimentSpec& spec, const emu::RunOutput& run, const std::vector<Window>& windows,
                         double bucket_s) {
  const logrepo::LogSnapshot snap = run.logs->snapshot();
  const Timeline t{run.epoch, run.duration, bucket_s};
  const std::string& consumer = spec.topology.node(spec.consumer).label;
  const std::string& producer = spec.topology.node(spec.producer).label;

  RunSummary s;
  s.repetition = run.repetition;
  s.seed = run.seed;
  s.consumer = run.consumer;
  s.series.push_back(compute_throughput(snap, consumer, t));
  s.series.push_back(compute_rtt(snap, consumer, t));
  s.series.push_back(compute_interest_rate(snap, producer, t));
  for (const topo::LinkKey& k : spec.topology.links()) {
    s.series.push_back(compute_link_delay(
        snap, fmt::format("{}-{}", spec.topology.node(k.a).label, spec.topology.node(k.b).label), t));
  }
  s.aggregates = aggregate_all(s.series, windows);
  return s;
}

std::vector<RunSummary> evaluate_experiment(const emu::ExperimentSpec& spec, const std::vector<Window>& windows,
                                            double bucket_s, unsigned threads) {
  std::vector<RunSummary> out;
  emu::for_each_run(
      spec, [&](emu::RunOutput&& run) { out.push_back(summarize_run(spec, run, windows, bucket_s)); }, threads);
  return out;
}

std::string export_runs_csv(const std::vector<RunSummary>& runs) {
  std::vector<MetricSeries> all;
  for (const RunSummary& r : runs) {
    for (MetricSeries s : r.series) {
      s.subject = fmt::format("rep{}/{}", r.repetition, s.subject);
      all.push_back(std::move(s));
    }
  }
  return export_csv(all);
}

namespace {

ordered_json series_json(const MetricSeries& s) {
  ordered_json pts = ordered_json::array();
  for (const Point& p : s.points) {
    pts.push_back({p.bucket_start, p.value ? ordered_json(*p.value) : ordered_json(nullptr)});
  }
  return {{"metric", std::string(to_string(s.metric))}, {"subject", s.subject}, {"bucket_s", s.bucket_s},
          {"points", pts}};
}

ordered_json aggregate_json(const Aggregate& a) {
  return {{"metric", std::string(to_string(a.metric))},
          {"subject", a.subject},
          {"window", {a.window.start_s, a.window.end_s}},
          {"n", a.n},
          {"mean", a.mean},
          {"stddev", a.stddev}};
}

ordered_json run_json(const RunSummary& s) {
  ordered_json j;
  j["repetition"] = s.repetition;
  j["seed"] = s.seed;
  j["consumer"] = {{"interests_emitted", s.consumer.emitted},
                   {"data_received", s.consumer.received},
                   {"timeouts", s.consumer.timeouts},
                   {"final_window", s.consumer.final_window}};
  ordered_json series = ordered_json::array();
  for (const auto& x : s.series) series.push_back(series_json(x));
  j["series"] = series;
  ordered_json aggs = ordered_json::array();
  for (const auto& a : s.aggregates) aggs.push_back(aggregate_json(a));
  j["aggregates"] = aggs;
  return j;
}

}  // namespace

std::string summary_to_json(const RunSummary& s) { return run_json(s).dump(); }

std::string summaries_to_json(const std::vector<RunSummary>& runs) {
  ordered_json j;
  ordered_json arr = ordered_json::array();
  for (const RunSummary& r : runs) arr.push_back(run_json(r));
  j["runs"] = arr;

  // Across repetitions: mean and spread of the per-run window means.
  ordered_json overall = ordered_json::array();
  if (!runs.empty()) {
    for (std::size_t i = 0; i < runs.front().aggregates.size(); ++i) {
      MetricSeries per_run{runs.front().aggregates[i].metric, runs.front().aggregates[i].subject, 1.0, {}};
      for (const RunSummary& r : runs) {
        if (i < r.aggregates.size() && r.aggregates[i].n > 0) {
          per_run.points.push_back(Point{0.0, r.aggregates[i].mean});
        }
      }
      Aggregate a = aggregate(per_run, Window{0.0, 1.0});
      a.window = runs.front().aggregates[i].window;
      overall.push_back(aggregate_json(a));
    }
  }
  j["aggregates"] = overall;
  return j.dump();
}

}  // namespace ndntb::eval
