#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ndntb/util/time.hpp"

namespace ndntb::logrepo {

enum class Severity : std::uint8_t {
  emergency = 0,
  alert = 1,
  critical = 2,
  error = 3,
  warning = 4,
  notice = 5,
  info = 6,
  debug = 7,
};

constexpr int kFacilityLocal4 = 20;

enum class SyslogErrc {
  bad_pri,           ///< missing or malformed "<PRI>"
  pri_out_of_range,  ///< PRI > 191
  bad_version,
  bad_timestamp,
  malformed_header,  ///< missing field, bad characters, or over-long field
  bad_structured_data,
};

std::string_view to_string(SyslogErrc e);

class SyslogParseError : public std::runtime_error {
 public:
  SyslogParseError(SyslogErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  SyslogErrc kind() const noexcept { return kind_; }

 private:
  SyslogErrc kind_;
};

/// One structured syslog line plus controller-side receipt metadata.
/// Text fields hold "" where the wire carries the nil value "-".
struct SyslogRecord {
  int facility = kFacilityLocal4;
  int severity = 5;
  int version = 1;
  std::string timestamp;  ///< wire text, RFC 3339
  std::optional<TimeUs> timestamp_us;
  std::string host;
  std::string app;
  std::string procid;
  std::string msgid;
  std::string structured_data;  ///< raw SD-ELEMENT text
  std::string msg;

  TimeUs received_at = 0;
  std::string source_addr;

  int priority() const noexcept { return facility * 8 + severity; }

  friend bool operator==(const SyslogRecord&, const SyslogRecord&) = default;
};

/// Parses "<PRI>VERSION TIMESTAMP HOST APP PROCID MSGID SD [MSG]".
/// Throws SyslogParseError; never crashes on arbitrary bytes.
SyslogRecord parse_syslog(std::string_view line);

/// Canonical wire text. format(parse(l)) == l for canonical lines.
std::string format_syslog(const SyslogRecord& record);

/// Builds a record with a timestamp taken from `at`.
SyslogRecord make_record(TimeUs at, Severity severity, std::string host, std::string app, std::string msg);

}  // namespace ndntb::logrepo
