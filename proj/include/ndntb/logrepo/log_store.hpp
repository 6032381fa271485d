#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ndntb/logrepo/append_log.hpp"
#include "ndntb/logrepo/syslog_record.hpp"

namespace ndntb::logrepo {

/// Records with severity <= max_severity pass (at least this important).
struct SeverityFilter {
  int max_severity = 7;

  bool passes(int severity) const noexcept { return severity <= max_severity; }
};

struct QuarantinedLine {
  std::string raw;
  SyslogErrc error = SyslogErrc::malformed_header;
  TimeUs received_at = 0;
  std::string source_addr;
};

struct LogQuery {
  std::optional<std::string> source = std::nullopt;
  std::optional<SeverityFilter> severity = std::nullopt;
  std::optional<std::pair<TimeUs, TimeUs>> range = std::nullopt;  ///< [t0, t1) on received_at
  std::optional<std::string> app = std::nullopt;
};

class InvalidQuery : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Point-in-time view of a LogStore; unaffected by later appends.
class LogSnapshot {
 public:
  LogSnapshot() = default;

  std::size_t size() const noexcept { return records_.size(); }
  const SyslogRecord& operator[](std::size_t i) const { return records_[i]; }
  const AppendLogView<SyslogRecord>& records() const& noexcept { return records_; }
  // By value on temporaries, so `for (auto& r : store.snapshot().records())` is safe.
  AppendLogView<SyslogRecord> records() && noexcept { return std::move(records_); }
  const AppendLogView<QuarantinedLine>& quarantine() const noexcept { return quarantine_; }

  /// Conjunction of the given predicates, in arrival order. Pointers stay
  /// valid for the snapshot's lifetime. Throws InvalidQuery when t0 > t1.
  std::vector<const SyslogRecord*> query(const LogQuery& q) const;

 private:
  friend class LogStore;

  AppendLogView<SyslogRecord> records_;
  AppendLogView<QuarantinedLine> quarantine_;
  std::map<std::string, AppendLogView<std::size_t>> by_source_;
  bool received_monotone_ = true;
};

/// Central append-only log repository. Appends are serialized internally, so
/// any number of producers may ingest concurrently.
class LogStore {
 public:
  /// Appends `record` with `received_at` stamped; returns the stored copy.
  SyslogRecord ingest(SyslogRecord record, TimeUs received_at);

  /// Parses one datagram; malformed lines land in quarantine.
  /// Returns true when the line parsed.
  bool ingest_line(std::string_view line, const std::string& source_addr, TimeUs received_at);

  LogSnapshot snapshot() const;

  std::size_t size() const;
  std::size_t quarantined() const;
  /// Every datagram offered to ingest_line or ingest.
  std::uint64_t total_received() const;

  /// Convenience: query on a fresh snapshot, returning copies.
  std::vector<SyslogRecord> query(const LogQuery& q) const;

 private:
  mutable std::mutex mu_;
  AppendLog<SyslogRecord> records_;
  AppendLog<QuarantinedLine> quarantine_;
  std::map<std::string, AppendLog<std::size_t>> by_source_;
  TimeUs last_received_ = INT64_MIN;
  bool received_monotone_ = true;
  std::uint64_t total_ = 0;
};

}  // namespace ndntb::logrepo
