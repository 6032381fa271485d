#include "ndntb/emu/apps.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ndntb/logrepo/events.hpp"

namespace ndntb::emu {

using logrepo::Severity;

void ProducerApp::on_interest(Network& net, const ndn::Interest& interest, TimeUs now) {
  ++served_;
  net.log(node(), Severity::notice, "producer",
          logrepo::format_event(logrepo::InterestEvent{interest.name.uri(), interest.nonce}));
  net.put_data(*this, ndn::Data{interest.name, payload_size_, now});
}

ConsumerApp::ConsumerApp(ConsumerConfig config)
    : config_(std::move(config)), rng_(config_.seed), interval_us_(1e6 / config_.max_rate) {}

ndn::Name ConsumerApp::segment_name(std::uint64_t seq) const {
  return config_.prefix.append("seg").append(std::to_string(seq));
}

void ConsumerApp::start(Network& net, TimeUs) {
  next_slot_us_ = static_cast<double>(config_.start_at);
  pace_timer_armed_ = true;
  net.schedule_timer(*this, config_.start_at, kPace);
}

void ConsumerApp::send(Network& net, std::uint64_t seq, bool retx, TimeUs now) {
  const auto nonce = static_cast<std::uint32_t>(rng_());
  outstanding_[seq] = Outstanding{now, retx};
  ++aimd_.in_flight;
  ++emitted_;
  const ndn::Name name = segment_name(seq);
  net.log(node(), Severity::notice, "consumer", logrepo::format_event(logrepo::InterestEvent{name.uri(), nonce}));
  net.schedule_timer(*this, now + aimd_.rto, kTimeout | (seq << 1), static_cast<std::uint64_t>(now));
  net.express_interest(*this, ndn::Interest{name, nonce, config_.hop_limit, now});
}

void ConsumerApp::pump(Network& net, TimeUs now) {
  while (now < config_.stop_at) {
    // Content is unbounded, so the window is the only thing that stops us.
    if (aimd_.in_flight >= static_cast<std::uint32_t>(std::ceil(aimd_.window))) return;

    const auto slot = static_cast<TimeUs>(std::ceil(next_slot_us_));
    if (now < slot) {
      if (!pace_timer_armed_) {
        pace_timer_armed_ = true;
        net.schedule_timer(*this, slot, kPace);
      }
      return;
    }
    next_slot_us_ = std::max(next_slot_us_, static_cast<double>(now)) + interval_us_;

    if (!retx_queue_.empty()) {
      const std::uint64_t seq = retx_queue_.front();
      retx_queue_.pop_front();
      send(net, seq, true, now);
    } else {
      send(net, aimd_.next_seq++, false, now);
    }
  }
}

void ConsumerApp::on_data(Network& net, const ndn::Data& data, TimeUs now) {
  const auto comps = data.name.components();
  if (comps.size() < 2 || comps[comps.size() - 2] != "seg") return;
  const std::uint64_t seq = std::stoull(comps.back());
  auto it = outstanding_.find(seq);
  if (it == outstanding_.end()) return;

  const Outstanding o = it->second;
  outstanding_.erase(it);
  --aimd_.in_flight;
  ++received_;

  const double rtt_ms = us_to_ms(now - o.sent_at);
  net.log(node(), Severity::notice, "consumer",
          logrepo::format_event(logrepo::DataEvent{data.name.uri(), data.payload_size}));
  if (!o.retransmitted) {
    net.log(node(), Severity::notice, "consumer", logrepo::format_event(logrepo::RttEvent{data.name.uri(), rtt_ms}));
    consumer_on_data(aimd_, rtt_ms);
  } else {
    consumer_on_data(aimd_, std::nullopt);
  }
  min_window_ = std::min(min_window_, aimd_.window);
  pump(net, now);
}

void ConsumerApp::on_timer(Network& net, std::uint64_t a, std::uint64_t b, TimeUs now) {
  if (a == kPace) {
    pace_timer_armed_ = false;
    pump(net, now);
    return;
  }
  const std::uint64_t seq = a >> 1;
  auto it = outstanding_.find(seq);
  if (it == outstanding_.end() || it->second.sent_at != static_cast<TimeUs>(b)) return;

  const TimeUs sent_at = it->second.sent_at;
  outstanding_.erase(it);
  --aimd_.in_flight;
  ++timeouts_;
  net.log(node(), Severity::info, "consumer", fmt::format("timeout {}", segment_name(seq).uri()));
  if (sent_at >= last_decrease_) {
    consumer_on_timeout(aimd_);
    last_decrease_ = now;
  }
  min_window_ = std::min(min_window_, aimd_.window);
  retx_queue_.push_back(seq);
  pump(net, now);
}

PingApp::PingApp(std::vector<Request> requests, std::uint64_t seed)
    : requests_(std::move(requests)),
      sent_at_(requests_.size(), -1),
      rtts_(requests_.size()),
      rng_(seed) {}

void PingApp::start(Network& net, TimeUs) {
  for (std::size_t i = 0; i < requests_.size(); ++i) net.schedule_timer(*this, requests_[i].at, i);
}

void PingApp::on_timer(Network& net, std::uint64_t a, std::uint64_t, TimeUs now) {
  const auto& req = requests_.at(a);
  sent_at_[a] = now;
  const auto nonce = static_cast<std::uint32_t>(rng_());
  net.log(node(), Severity::notice, "ping", logrepo::format_event(logrepo::InterestEvent{req.name.uri(), nonce}));
  net.express_interest(*this, ndn::Interest{req.name, nonce, ndn::kDefaultHopLimit, now});
}

void PingApp::on_data(Network& net, const ndn::Data& data, TimeUs now) {
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    if (requests_[i].name != data.name || sent_at_[i] < 0 || rtts_[i]) continue;
    rtts_[i] = us_to_ms(now - sent_at_[i]);
    net.log(node(), Severity::notice, "ping",
            logrepo::format_event(logrepo::DataEvent{data.name.uri(), data.payload_size}));
    net.log(node(), Severity::notice, "ping", logrepo::format_event(logrepo::RttEvent{data.name.uri(), *rtts_[i]}));
  }
}

}  // namespace ndntb::emu
