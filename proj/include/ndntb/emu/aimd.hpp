#pragma once

#include <cstdint>
#include <optional>

#include "ndntb/util/time.hpp"

namespace ndntb::emu {

constexpr TimeUs kMinRto = 200 * kUsPerMs;
constexpr TimeUs kMaxRto = 4 * kUsPerSec;
constexpr TimeUs kInitialRto = 1 * kUsPerSec;

/// Consumer-side congestion window and RTT estimator.
struct AimdState {
  double window = 1.0;
  std::uint32_t in_flight = 0;
  TimeUs rto = kInitialRto;
  std::optional<double> srtt_ms;
  double rttvar_ms = 0.0;
  std::uint64_t next_seq = 0;
};

/// Additive increase (window += 1/window) plus an RTT sample when one is
/// given: srtt = 7/8 srtt + 1/8 s, rttvar = 3/4 rttvar + 1/4 |srtt - s|,
/// rto = srtt + 4 rttvar clamped to [200 ms, 4 s]. The first sample seeds
/// srtt = s, rttvar = s/2.
void consumer_on_data(AimdState& s, std::optional<double> rtt_sample_ms);

/// Multiplicative decrease: window = max(1, window / 2).
void consumer_on_timeout(AimdState& s);

/// Interest issue cap for a demand in Mb/s and a payload size in bytes:
/// demand * 1e6 / (8 * payload).
double demand_to_interest_rate(double demand_mbps, std::uint32_t payload_bytes);

}  // namespace ndntb::emu
