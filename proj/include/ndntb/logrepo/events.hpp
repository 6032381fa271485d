#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace ndntb::logrepo {

// Forwarder and application event messages carried in the MSG part of a
// syslog record. Space separated, names in canonical "/a/b" form:
//   interest NAME NONCE
//   data NAME BYTES
//   rtt NAME MS
//   probe LINK MS | probe LINK loss

struct InterestEvent {
  std::string name;
  std::uint32_t nonce = 0;
};

struct DataEvent {
  std::string name;
  std::uint64_t bytes = 0;
};

struct RttEvent {
  std::string name;
  double ms = 0.0;
};

struct ProbeEvent {
  std::string link;
  std::optional<double> ms;  ///< nullopt for a lost probe
};

using Event = std::variant<InterestEvent, DataEvent, RttEvent, ProbeEvent>;

std::string format_event(const Event& e);

/// nullopt for messages outside the grammar.
std::optional<Event> parse_event(std::string_view msg);

}  // namespace ndntb::logrepo
