#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>

#include "ndntb/logrepo/log_store.hpp"
#include "ndntb/util/udp_socket.hpp"

namespace ndntb::logrepo {

constexpr std::uint16_t kDefaultSyslogPort = 514;

/// Receives one syslog line per UDP datagram and ingests it into a LogStore,
/// stamping received_at with the controller's wall clock.
class SyslogListener {
 public:
  SyslogListener(LogStore& store, const std::string& address, std::uint16_t port);
  ~SyslogListener();

  SyslogListener(const SyslogListener&) = delete;
  SyslogListener& operator=(const SyslogListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::uint64_t datagrams() const noexcept { return datagrams_.load(); }
  void stop();

 private:
  void run();

  LogStore& store_;
  UdpSocket socket_;
  std::uint16_t port_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> datagrams_{0};
  std::thread thread_;
};

}  // namespace ndntb::logrepo
