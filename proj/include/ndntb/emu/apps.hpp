#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <unordered_map>
#include <vector>

#include "ndntb/emu/aimd.hpp"
#include "ndntb/emu/network.hpp"

namespace ndntb::emu {

/// Answers every interest under its prefix with `payload_size` bytes.
/// Logs each arriving interest ("interest NAME NONCE").
class ProducerApp : public App {
 public:
  explicit ProducerApp(std::uint32_t payload_size) : payload_size_(payload_size) {}

  void start(Network&, TimeUs) override {}
  void on_interest(Network& net, const ndn::Interest& interest, TimeUs now) override;

  std::uint64_t served() const noexcept { return served_; }

 private:
  std::uint32_t payload_size_;
  std::uint64_t served_ = 0;
};

struct ConsumerConfig {
  ndn::Name prefix = ndn::Name::parse("/testbed");
  /// Cap on interest emissions per second (new and retransmitted).
  double max_rate = 2000.0;
  TimeUs start_at = 0;
  /// No interests are issued at or after this time.
  TimeUs stop_at = INT64_MAX;
  std::uint8_t hop_limit = ndn::kDefaultHopLimit;
  std::uint64_t seed = 0;
};

/// Fetches sequential segments "<prefix>/seg/<n>" under AIMD window control,
/// never exceeding the configured issue rate. Timeouts retransmit with a
/// fresh nonce; the window is halved at most once per loss event (only for
/// interests sent after the previous decrease).
///
/// Logs "interest NAME NONCE" per emission, "data NAME BYTES" per first
/// receipt and "rtt NAME MS" for samples from non-retransmitted interests.
class ConsumerApp : public App {
 public:
  explicit ConsumerApp(ConsumerConfig config);

  void start(Network& net, TimeUs now) override;
  void on_data(Network& net, const ndn::Data& data, TimeUs now) override;
  void on_timer(Network& net, std::uint64_t a, std::uint64_t b, TimeUs now) override;

  const AimdState& aimd() const noexcept { return aimd_; }
  std::uint64_t received() const noexcept { return received_; }
  std::uint64_t emitted() const noexcept { return emitted_; }
  std::uint64_t timeouts() const noexcept { return timeouts_; }
  /// Smallest window observed after any update.
  double min_window() const noexcept { return min_window_; }

 private:
  struct Outstanding {
    TimeUs sent_at = 0;
    bool retransmitted = false;
  };

  enum TimerKind : std::uint64_t { kPace = 0, kTimeout = 1 };

  void pump(Network& net, TimeUs now);
  void send(Network& net, std::uint64_t seq, bool retx, TimeUs now);
  ndn::Name segment_name(std::uint64_t seq) const;

  ConsumerConfig config_;
  AimdState aimd_;
  std::mt19937_64 rng_;
  double interval_us_;
  double next_slot_us_ = 0.0;
  bool pace_timer_armed_ = false;
  TimeUs last_decrease_ = INT64_MIN;
  std::unordered_map<std::uint64_t, Outstanding> outstanding_;
  std::deque<std::uint64_t> retx_queue_;
  std::uint64_t received_ = 0;
  std::uint64_t emitted_ = 0;
  std::uint64_t timeouts_ = 0;
  double min_window_ = 1.0;
};

/// Issues single interests at fixed times and records their RTTs.
class PingApp : public App {
 public:
  struct Request {
    TimeUs at = 0;
    ndn::Name name;
  };

  explicit PingApp(std::vector<Request> requests, std::uint64_t seed = 0);

  void start(Network& net, TimeUs now) override;
  void on_data(Network& net, const ndn::Data& data, TimeUs now) override;
  void on_timer(Network& net, std::uint64_t a, std::uint64_t b, TimeUs now) override;

  /// RTT per request in ms; absent until answered.
  const std::vector<std::optional<double>>& rtts() const noexcept { return rtts_; }

 private:
  std::vector<Request> requests_;
  std::vector<TimeUs> sent_at_;
  std::vector<std::optional<double>> rtts_;
  std::mt19937_64 rng_;
};

}  // namespace ndntb::emu
