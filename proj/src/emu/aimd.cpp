#include "ndntb/emu/aimd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ndntb::emu {

void consumer_on_data(AimdState& s, std::optional<double> rtt_sample_ms) {
  s.window += 1.0 / s.window;
  if (!rtt_sample_ms) return;

  const double sample = *rtt_sample_ms;
  if (!s.srtt_ms) {
    s.srtt_ms = sample;
    s.rttvar_ms = sample / 2.0;
  } else {
    // rttvar uses the previous srtt, as in the standard estimator.
    s.rttvar_ms = 0.75 * s.rttvar_ms + 0.25 * std::abs(*s.srtt_ms - sample);
    s.srtt_ms = 0.875 * *s.srtt_ms + 0.125 * sample;
  }
  const TimeUs rto = ms_to_us(*s.srtt_ms + 4.0 * s.rttvar_ms);
  s.rto = std::clamp(rto, kMinRto, kMaxRto);
}

void consumer_on_timeout(AimdState& s) { s.window = std::max(1.0, s.window / 2.0); }

double demand_to_interest_rate(double demand_mbps, std::uint32_t payload_bytes) {
  if (payload_bytes == 0) throw std::invalid_argument("payload size must be positive");
  return demand_mbps * 1e6 / (8.0 * static_cast<double>(payload_bytes));
}

}  // namespace ndntb::emu
