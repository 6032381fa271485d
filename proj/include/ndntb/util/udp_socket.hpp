#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ndntb {

struct Datagram {
  std::vector<std::uint8_t> bytes;
  std::string source;  ///< "a.b.c.d:port"
};

/// Owning IPv4 UDP socket. Move-only.
class UdpSocket {
 public:
  /// Binds to `address:port`; port 0 picks an ephemeral port.
  static UdpSocket bind(const std::string& address, std::uint16_t port);
  /// Unbound socket for sending.
  static UdpSocket open();

  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;
  ~UdpSocket();

  std::uint16_t local_port() const;

  /// Waits up to `timeout` for one datagram.
  std::optional<Datagram> receive(std::chrono::milliseconds timeout);

  void send_to(const std::string& address, std::uint16_t port, std::span<const std::uint8_t> bytes);

 private:
  explicit UdpSocket(int fd) : fd_(fd) {}
  int fd_ = -1;
};

}  // namespace ndntb
