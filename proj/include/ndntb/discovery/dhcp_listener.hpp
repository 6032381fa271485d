#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>

#include "ndntb/discovery/lease.hpp"
#include "ndntb/util/udp_socket.hpp"

namespace ndntb::discovery {

constexpr std::uint16_t kDefaultDhcpPort = 6767;

/// Feeds DISCOVER/REQUEST datagrams into a LeaseRegistry. No replies are
/// sent; the registry (and the optional callback) is the output.
class DhcpListener {
 public:
  using OnLease = std::function<void(const LeaseRecord&)>;

  DhcpListener(LeaseRegistry& registry, const std::string& address, std::uint16_t port, OnLease on_lease = {});
  ~DhcpListener();

  DhcpListener(const DhcpListener&) = delete;
  DhcpListener& operator=(const DhcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::uint64_t accepted() const noexcept { return accepted_.load(); }
  std::uint64_t rejected() const noexcept { return rejected_.load(); }
  void stop();

 private:
  void run();

  LeaseRegistry& registry_;
  UdpSocket socket_;
  std::uint16_t port_;
  OnLease on_lease_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> accepted_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::thread thread_;
};

}  // namespace ndntb::discovery
