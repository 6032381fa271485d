#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ndntb/emu/benchmark.hpp"
#include "ndntb/emu/experiment.hpp"
#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/util/time.hpp"

namespace ndntb::eval {

enum class Metric { throughput_mbps, rtt_ms, link_delay_ms, interest_rate, table_sizes, phase_runtime_s };

std::string_view to_string(Metric m);

struct Point {
  double bucket_start = 0;  ///< seconds from the run origin
  /// Absent = gap marker (e.g. a lost probe round).
  std::optional<double> value;

  friend bool operator==(const Point&, const Point&) = default;
};

struct MetricSeries {
  Metric metric = Metric::throughput_mbps;
  std::string subject;  ///< node label, link "A-B", or phase
  double bucket_s = 1.0;
  std::vector<Point> points;

  friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

/// Where a run sits on the record clock and how to bucket it.
struct Timeline {
  TimeUs origin = kEmulationEpochUs;
  TimeUs duration = 0;
  double bucket_s = 1.0;

  /// ceil(duration / bucket)
  std::size_t bucket_count() const;
};

/// Goodput at `node`: per bucket, sum of "data NAME BYTES" bytes * 8 /
/// bucket / 1e6. Every bucket is present; empty ones are 0.
MetricSeries compute_throughput(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t);

/// Interests arriving at `node` (a producer), per second.
MetricSeries compute_interest_rate(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t);

/// Mean "rtt NAME MS" per bucket; buckets without samples are omitted.
MetricSeries compute_rtt(const logrepo::LogSnapshot& logs, std::string_view node, const Timeline& t);

/// One point per probe round at k * interval; rounds without a sample (loss
/// or no reply yet) are gaps.
MetricSeries compute_link_delay(const logrepo::LogSnapshot& logs, std::string_view link, const Timeline& t,
                                TimeUs probe_interval = 5 * kUsPerSec);

/// table_sizes per node and phase_runtime_s per phase, one point each at 0.
std::vector<MetricSeries> benchmark_series(const emu::BenchmarkReport& report);

/// "metric,subject,bucket_start,value", one row per point, series in input
/// order; numbers fixed at 6 decimals, gaps as an empty value, subjects
/// quoted when needed.
std::string export_csv(std::span<const MetricSeries> series);

}  // namespace ndntb::eval
