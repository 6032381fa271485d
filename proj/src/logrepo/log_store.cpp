#include "ndntb/logrepo/log_store.hpp"

#include <fmt/format.h>

namespace ndntb::logrepo {

namespace {

bool matches(const SyslogRecord& r, const LogQuery& q) {
  if (q.severity && !q.severity->passes(r.severity)) return false;
  if (q.app && r.app != *q.app) return false;
  if (q.range && (r.received_at < q.range->first || r.received_at >= q.range->second)) return false;
  if (q.source && r.source_addr != *q.source) return false;
  return true;
}

// First position in [lo, hi) whose record has received_at >= t, assuming
// received_at is nondecreasing along `at`.
template <class At>
std::size_t lower_bound_time(std::size_t lo, std::size_t hi, TimeUs t, At at) {
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (at(mid) < t) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

std::vector<const SyslogRecord*> LogSnapshot::query(const LogQuery& q) const {
  if (q.range && q.range->first > q.range->second) {
    throw InvalidQuery(fmt::format("inverted range [{}, {})", q.range->first, q.range->second));
  }
  std::vector<const SyslogRecord*> out;

  auto scan = [&](std::size_t count, auto record_at) {
    std::size_t lo = 0;
    std::size_t hi = count;
    if (q.range && received_monotone_) {
      auto t = [&](std::size_t i) { return record_at(i).received_at; };
      lo = lower_bound_time(0, count, q.range->first, t);
      hi = lower_bound_time(lo, count, q.range->second, t);
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const SyslogRecord& r = record_at(i);
      if (matches(r, q)) out.push_back(&r);
    }
  };

  if (q.source) {
    auto it = by_source_.find(*q.source);
    if (it == by_source_.end()) return out;
    const auto& positions = it->second;
    scan(positions.size(), [&](std::size_t i) -> const SyslogRecord& { return records_[positions[i]]; });
  } else {
    scan(records_.size(), [&](std::size_t i) -> const SyslogRecord& { return records_[i]; });
  }
  return out;
}

SyslogRecord LogStore::ingest(SyslogRecord record, TimeUs received_at) {
  record.received_at = received_at;
  std::lock_guard lock(mu_);
  ++total_;
  if (received_at < last_received_) received_monotone_ = false;
  last_received_ = received_at;
  by_source_[record.source_addr].append(records_.size());
  return records_.append(std::move(record));
}

bool LogStore::ingest_line(std::string_view line, const std::string& source_addr, TimeUs received_at) {
  try {
    SyslogRecord r = parse_syslog(line);
    r.source_addr = source_addr;
    ingest(std::move(r), received_at);
    return true;
  } catch (const SyslogParseError& e) {
    std::lock_guard lock(mu_);
    ++total_;
    quarantine_.append(QuarantinedLine{std::string(line), e.kind(), received_at, source_addr});
    return false;
  }
}

LogSnapshot LogStore::snapshot() const {
  std::lock_guard lock(mu_);
  LogSnapshot s;
  s.records_ = records_.view();
  s.quarantine_ = quarantine_.view();
  for (const auto& [src, positions] : by_source_) s.by_source_.emplace(src, positions.view());
  s.received_monotone_ = received_monotone_;
  return s;
}

std::size_t LogStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::size_t LogStore::quarantined() const {
  std::lock_guard lock(mu_);
  return quarantine_.size();
}

std::uint64_t LogStore::total_received() const {
  std::lock_guard lock(mu_);
  return total_;
}

std::vector<SyslogRecord> LogStore::query(const LogQuery& q) const {
  const LogSnapshot snap = snapshot();
  std::vector<SyslogRecord> out;
  for (const SyslogRecord* r : snap.query(q)) out.push_back(*r);
  return out;
}

}  // namespace ndntb::logrepo
