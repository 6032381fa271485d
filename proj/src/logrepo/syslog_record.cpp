#include "ndntb/logrepo/syslog_record.hpp"

#include <fmt/format.h>

namespace ndntb::logrepo {

std::string_view to_string(SyslogErrc e) {
  switch (e) {
    case SyslogErrc::bad_pri: return "bad_pri";
    case SyslogErrc::pri_out_of_range: return "pri_out_of_range";
    case SyslogErrc::bad_version: return "bad_version";
    case SyslogErrc::bad_timestamp: return "bad_timestamp";
    case SyslogErrc::malformed_header: return "malformed_header";
    case SyslogErrc::bad_structured_data: return "bad_structured_data";
  }
  return "unknown";
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return s_.substr(pos_); }

  void expect_space(const char* after) {
    if (done() || s_[pos_] != ' ') {
      throw SyslogParseError(SyslogErrc::malformed_header, fmt::format("expected space after {}", after));
    }
    ++pos_;
  }

  /// Printable US-ASCII token up to the next space, at most `max_len` chars.
  std::string_view token(const char* field, std::size_t max_len) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ') {
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (c < 33 || c > 126) {
        throw SyslogParseError(SyslogErrc::malformed_header, fmt::format("non-printable byte in {}", field));
      }
      ++pos_;
    }
    const std::string_view t = s_.substr(start, pos_ - start);
    if (t.empty()) throw SyslogParseError(SyslogErrc::malformed_header, fmt::format("missing {}", field));
    if (t.size() > max_len) throw SyslogParseError(SyslogErrc::malformed_header, fmt::format("{} too long", field));
    return t;
  }

  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string nil_to_empty(std::string_view t) { return t == "-" ? std::string() : std::string(t); }

std::string_view empty_to_nil(const std::string& s) { return s.empty() ? std::string_view("-") : std::string_view(s); }

// SD-ELEMENT: "[" SD-NAME *(SP PARAM-NAME "=" %d34 PARAM-VALUE %d34) "]".
// Returns the length of one or more consecutive elements at the cursor.
std::size_t scan_structured_data(std::string_view s) {
  std::size_t i = 0;
  auto sd_name = [&](char stop1, char stop2) {
    const std::size_t start = i;
    while (i < s.size() && s[i] != stop1 && s[i] != stop2) {
      const auto c = static_cast<unsigned char>(s[i]);
      if (c < 33 || c > 126 || c == '=' || c == ']' || c == '"') {
        throw SyslogParseError(SyslogErrc::bad_structured_data, "invalid SD name character");
      }
      ++i;
    }
    if (i == start || i - start > 32) throw SyslogParseError(SyslogErrc::bad_structured_data, "bad SD name length");
  };
  if (s.empty() || s[0] != '[') throw SyslogParseError(SyslogErrc::bad_structured_data, "SD must start with '['");
  while (i < s.size() && s[i] == '[') {
    ++i;
    sd_name(' ', ']');
    while (i < s.size() && s[i] == ' ') {
      ++i;
      sd_name('=', '=');
      if (i >= s.size() || s[i] != '=') throw SyslogParseError(SyslogErrc::bad_structured_data, "expected '='");
      ++i;
      if (i >= s.size() || s[i] != '"') throw SyslogParseError(SyslogErrc::bad_structured_data, "expected '\"'");
      ++i;
      for (;;) {
        if (i >= s.size()) throw SyslogParseError(SyslogErrc::bad_structured_data, "unterminated param value");
        if (s[i] == '\\' && i + 1 < s.size()) {
          i += 2;
          continue;
        }
        if (s[i] == '"') break;
        ++i;
      }
      ++i;
    }
    if (i >= s.size() || s[i] != ']') throw SyslogParseError(SyslogErrc::bad_structured_data, "expected ']'");
    ++i;
  }
  return i;
}

}  // namespace

SyslogRecord parse_syslog(std::string_view line) {
  // Datagram senders commonly append a newline.
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);

  SyslogRecord r;
  if (line.size() < 3 || line[0] != '<') throw SyslogParseError(SyslogErrc::bad_pri, "missing '<PRI>'");
  std::size_t close = line.find('>');
  if (close == std::string_view::npos || close < 2 || close > 4) {
    throw SyslogParseError(SyslogErrc::bad_pri, "malformed '<PRI>'");
  }
  int pri = 0;
  for (std::size_t i = 1; i < close; ++i) {
    if (line[i] < '0' || line[i] > '9') throw SyslogParseError(SyslogErrc::bad_pri, "non-digit in PRI");
    pri = pri * 10 + (line[i] - '0');
  }
  if (close > 2 && line[1] == '0') throw SyslogParseError(SyslogErrc::bad_pri, "leading zero in PRI");
  if (pri > 191) throw SyslogParseError(SyslogErrc::pri_out_of_range, fmt::format("PRI {} exceeds 191", pri));
  r.facility = pri / 8;
  r.severity = pri % 8;

  Cursor c(line);
  c.advance(close + 1);

  const std::size_t vstart = c.pos();
  int version = 0;
  std::size_t vdigits = 0;
  while (!c.done() && c.peek() >= '0' && c.peek() <= '9') {
    version = version * 10 + (c.peek() - '0');
    c.advance(1);
    if (++vdigits > 3) break;
  }
  if (vdigits == 0 || vdigits > 3 || line[vstart] == '0') {
    throw SyslogParseError(SyslogErrc::bad_version, "VERSION must be 1-3 digits, nonzero");
  }
  r.version = version;
  c.expect_space("VERSION");

  const std::string_view ts = c.token("TIMESTAMP", 64);
  if (ts != "-") {
    r.timestamp_us = parse_rfc3339(ts);
    if (!r.timestamp_us) throw SyslogParseError(SyslogErrc::bad_timestamp, fmt::format("bad timestamp '{}'", ts));
    r.timestamp = std::string(ts);
  }
  c.expect_space("TIMESTAMP");
  r.host = nil_to_empty(c.token("HOSTNAME", 255));
  c.expect_space("HOSTNAME");
  r.app = nil_to_empty(c.token("APP-NAME", 48));
  c.expect_space("APP-NAME");
  r.procid = nil_to_empty(c.token("PROCID", 128));
  c.expect_space("PROCID");
  r.msgid = nil_to_empty(c.token("MSGID", 32));
  c.expect_space("MSGID");

  if (c.done()) throw SyslogParseError(SyslogErrc::malformed_header, "missing STRUCTURED-DATA");
  if (c.peek() == '-') {
    c.advance(1);
  } else {
    const std::size_t n = scan_structured_data(c.rest());
    r.structured_data = std::string(c.rest().substr(0, n));
    c.advance(n);
  }

  if (!c.done()) {
    c.expect_space("STRUCTURED-DATA");
    r.msg = std::string(c.rest());
  }
  return r;
}

std::string format_syslog(const SyslogRecord& r) {
  std::string out = fmt::format("<{}>{} {} {} {} {} {} {}", r.priority(), r.version, empty_to_nil(r.timestamp),
                                empty_to_nil(r.host), empty_to_nil(r.app), empty_to_nil(r.procid),
                                empty_to_nil(r.msgid), empty_to_nil(r.structured_data));
  if (!r.msg.empty()) {
    out += ' ';
    out += r.msg;
  }
  return out;
}

SyslogRecord make_record(TimeUs at, Severity severity, std::string host, std::string app, std::string msg) {
  SyslogRecord r;
  r.severity = static_cast<int>(severity);
  r.timestamp = format_rfc3339(at);
  r.timestamp_us = at;
  r.host = std::move(host);
  r.app = std::move(app);
  r.msg = std::move(msg);
  return r;
}

}  // namespace ndntb::logrepo
