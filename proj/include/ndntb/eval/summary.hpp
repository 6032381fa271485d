#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndntb/emu/experiment.hpp"
#include "ndntb/eval/metrics.hpp"

namespace ndntb::eval {

/// Buckets whose start lies in [start, end), i.e. the window (start, end]
/// of bucket end times.
struct Window {
  double start_s = 0;
  double end_s = 0;

  friend bool operator==(const Window&, const Window&) = default;
};

struct Aggregate {
  Metric metric = Metric::throughput_mbps;
  std::string subject;
  Window window;
  std::size_t n = 0;  ///< non-gap points used
  double mean = 0;
  double stddev = 0;  ///< population

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct RunSummary {
  std::uint32_t repetition = 0;
  std::uint64_t seed = 0;
  std::vector<MetricSeries> series;
  std::vector<Aggregate> aggregates;
  emu::ConsumerSummary consumer;
};

Aggregate aggregate(const MetricSeries& s, const Window& w);
std::vector<Aggregate> aggregate_all(const std::vector<MetricSeries>& series, const std::vector<Window>& windows);

/// Series: consumer throughput and RTT, producer interest rate, and the
/// delay of every link; aggregates over `windows`.
RunSummary summarize_run(const emu::ExperimentSpec& spec, const emu::RunOutput& run, const std::vector<Window>& windows,
                         double bucket_s = 1.0);

/// Runs every repetition and summarizes each, in repetition order.
std::vector<RunSummary> evaluate_experiment(const emu::ExperimentSpec& spec, const std::vector<Window>& windows,
                                            double bucket_s = 1.0, unsigned threads = 0);

/// All series of all runs; the subject is prefixed with "rep<r>/".
std::string export_runs_csv(const std::vector<RunSummary>& runs);

std::string summary_to_json(const RunSummary& s);
/// {"runs": [...], "aggregates": [mean across runs of each per-run mean]}
std::string summaries_to_json(const std::vector<RunSummary>& runs);

}  // namespace ndntb::eval
