#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ndntb {

/// Microseconds. Emulator time and wall-clock instants share this unit.
using TimeUs = std::int64_t;

constexpr TimeUs kUsPerMs = 1000;
constexpr TimeUs kUsPerSec = 1000 * 1000;

constexpr TimeUs ms_to_us(double ms) { return static_cast<TimeUs>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5)); }
constexpr TimeUs sec_to_us(double s) { return static_cast<TimeUs>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)); }
constexpr double us_to_ms(TimeUs us) { return static_cast<double>(us) / 1000.0; }
constexpr double us_to_sec(TimeUs us) { return static_cast<double>(us) / 1e6; }

/// Epoch origin of emulated runs: 2024-01-01T00:00:00Z in microseconds since the Unix epoch.
constexpr TimeUs kEmulationEpochUs = 1704067200LL * kUsPerSec;

/// Formats an instant as RFC 3339 in UTC with microsecond precision,
/// e.g. "2024-01-01T00:00:08.000500Z".
std::string format_rfc3339(TimeUs unix_us);

/// Parses an RFC 3339 timestamp ("Z" or numeric offset, up to 6 fractional
/// digits). Returns the instant in microseconds since the Unix epoch.
std::optional<TimeUs> parse_rfc3339(std::string_view text);

/// Current wall-clock time.
TimeUs wall_clock_now();

}  // namespace ndntb
