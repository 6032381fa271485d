#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndntb::discovery {

enum class DhcpErrc {
  too_short,           ///< fewer than 236 header bytes + 4 cookie bytes
  missing_cookie,
  truncated_option,    ///< length byte runs past the end of the buffer
  missing_terminator,  ///< no option 255
};

std::string_view to_string(DhcpErrc e);

class DhcpParseError : public std::runtime_error {
 public:
  DhcpParseError(DhcpErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  DhcpErrc kind() const noexcept { return kind_; }

 private:
  DhcpErrc kind_;
};

enum class MessageType : std::uint8_t {
  discover = 1, offer = 2, request = 3, decline = 4, ack = 5, nak = 6, release = 7, inform = 8,
};

constexpr std::size_t kFixedHeaderSize = 236;
constexpr std::array<std::uint8_t, 4> kMagicCookie{99, 130, 83, 99};
constexpr std::uint8_t kOptPad = 0;
constexpr std::uint8_t kOptMessageType = 53;
constexpr std::uint8_t kOptVendorClass = 60;
constexpr std::uint8_t kOptEnd = 255;

/// Option as it appeared on the wire. Pad bytes are kept as code-0 entries
/// with no payload so serialization is byte-exact.
struct DhcpOption {
  std::uint8_t code = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const DhcpOption&, const DhcpOption&) = default;
};

struct DhcpMessage {
  std::uint8_t op = 1;
  std::uint8_t htype = 1;
  std::uint8_t hlen = 6;
  std::uint8_t hops = 0;
  std::uint32_t xid = 0;
  std::uint16_t secs = 0;
  std::uint16_t flags = 0;
  std::array<std::uint8_t, 4> ciaddr{};
  std::array<std::uint8_t, 4> yiaddr{};
  std::array<std::uint8_t, 4> siaddr{};
  std::array<std::uint8_t, 4> giaddr{};
  std::array<std::uint8_t, 16> chaddr{};
  std::array<std::uint8_t, 64> sname{};
  std::array<std::uint8_t, 128> file{};
  /// In wire order, excluding the end option.
  std::vector<DhcpOption> options;
  /// Bytes after the end option (usually zero padding).
  std::vector<std::uint8_t> trailing;
  /// From option 53, when present.
  std::optional<MessageType> message_type;

  /// First occurrence of `code`.
  const DhcpOption* option(std::uint8_t code) const;
  /// Option 60 as text; empty when absent.
  std::string vendor_class() const;
  std::array<std::uint8_t, 6> mac() const;
};

DhcpMessage parse_dhcp_message(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_dhcp_message(const DhcpMessage& msg);

/// Minimal client message: option 53, then option 60 when `vci` is set.
DhcpMessage make_client_message(MessageType type, const std::array<std::uint8_t, 6>& mac, std::uint32_t xid,
                                const std::optional<std::string>& vci);

std::string format_mac(const std::array<std::uint8_t, 6>& mac);
/// "aa:bb:cc:dd:ee:ff", case-insensitive.
std::optional<std::array<std::uint8_t, 6>> parse_mac(std::string_view text);

}  // namespace ndntb::discovery
