#include "ndntb/discovery/dhcp_listener.hpp"

namespace ndntb::discovery {

DhcpListener::DhcpListener(LeaseRegistry& registry, const std::string& address, std::uint16_t port, OnLease on_lease)
    : registry_(registry),
      socket_(UdpSocket::bind(address, port)),
      port_(socket_.local_port()),
      on_lease_(std::move(on_lease)) {
  thread_ = std::thread([this] { run(); });
}

DhcpListener::~DhcpListener() { stop(); }

void DhcpListener::stop() {
  stopping_ = true;
  if (thread_.joinable()) thread_.join();
}

void DhcpListener::run() {
  while (!stopping_) {
    auto dgram = socket_.receive(std::chrono::milliseconds(50));
    if (!dgram) continue;
    try {
      const DhcpMessage msg = parse_dhcp_message(dgram->bytes);
      const LeaseRecord lease = registry_.handle_discover(msg, wall_clock_now());
      ++accepted_;
      if (on_lease_) on_lease_(lease);
    } catch (const DhcpParseError&) {
      ++rejected_;
    } catch (const LeaseError&) {
      ++rejected_;
    }
  }
}

}  // namespace ndntb::discovery
