#include "ndntb/discovery/dhcp.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace ndntb::discovery {

std::string_view to_string(DhcpErrc e) {
  switch (e) {
    case DhcpErrc::too_short: return "too_short";
    case DhcpErrc::missing_cookie: return "missing_cookie";
    case DhcpErrc::truncated_option: return "truncated_option";
    case DhcpErrc::missing_terminator: return "missing_terminator";
  }
  return "unknown";
}

const DhcpOption* DhcpMessage::option(std::uint8_t code) const {
  for (const auto& o : options) {
    if (o.code == code) return &o;
  }
  return nullptr;
}

std::string DhcpMessage::vendor_class() const {
  const DhcpOption* o = option(kOptVendorClass);
  return o ? std::string(o->payload.begin(), o->payload.end()) : std::string();
}

std::array<std::uint8_t, 6> DhcpMessage::mac() const {
  std::array<std::uint8_t, 6> m{};
  std::copy_n(chaddr.begin(), 6, m.begin());
  return m;
}

namespace {

template <std::size_t N>
void take(std::span<const std::uint8_t> in, std::size_t& pos, std::array<std::uint8_t, N>& out) {
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(pos), N, out.begin());
  pos += N;
}

std::uint32_t be32(std::span<const std::uint8_t> in, std::size_t pos) {
  return (std::uint32_t{in[pos]} << 24) | (std::uint32_t{in[pos + 1]} << 16) | (std::uint32_t{in[pos + 2]} << 8) |
         in[pos + 3];
}

std::uint16_t be16(std::span<const std::uint8_t> in, std::size_t pos) {
  return static_cast<std::uint16_t>((in[pos] << 8) | in[pos + 1]);
}

}  // namespace

DhcpMessage parse_dhcp_message(std::span<const std::uint8_t> in) {
  if (in.size() < kFixedHeaderSize + kMagicCookie.size()) {
    throw DhcpParseError(DhcpErrc::too_short, fmt::format("{} bytes, need at least {}", in.size(),
                                                          kFixedHeaderSize + kMagicCookie.size()));
  }
  DhcpMessage m;
  m.op = in[0];
  m.htype = in[1];
  m.hlen = in[2];
  m.hops = in[3];
  m.xid = be32(in, 4);
  m.secs = be16(in, 8);
  m.flags = be16(in, 10);
  std::size_t pos = 12;
  take(in, pos, m.ciaddr);
  take(in, pos, m.yiaddr);
  take(in, pos, m.siaddr);
  take(in, pos, m.giaddr);
  take(in, pos, m.chaddr);
  take(in, pos, m.sname);
  take(in, pos, m.file);
  if (!std::equal(kMagicCookie.begin(), kMagicCookie.end(), in.begin() + kFixedHeaderSize)) {
    throw DhcpParseError(DhcpErrc::missing_cookie, "magic cookie 99.130.83.99 not found");
  }
  pos = kFixedHeaderSize + kMagicCookie.size();

  bool ended = false;
  while (pos < in.size()) {
    const std::uint8_t code = in[pos++];
    if (code == kOptEnd) {
      ended = true;
      break;
    }
    if (code == kOptPad) {
      m.options.push_back(DhcpOption{kOptPad, {}});
      continue;
    }
    if (pos >= in.size()) {
      throw DhcpParseError(DhcpErrc::truncated_option, fmt::format("option {} has no length byte", code));
    }
    const std::size_t len = in[pos++];
    if (len > in.size() - pos) {
      throw DhcpParseError(DhcpErrc::truncated_option, fmt::format("option {} declares {} bytes, {} remain", code,
                                                                   len, in.size() - pos));
    }
    m.options.push_back(DhcpOption{code, std::vector<std::uint8_t>(in.begin() + static_cast<std::ptrdiff_t>(pos),
                                                                   in.begin() + static_cast<std::ptrdiff_t>(pos + len))});
    pos += len;
  }
  if (!ended) throw DhcpParseError(DhcpErrc::missing_terminator, "option list has no end option");
  m.trailing.assign(in.begin() + static_cast<std::ptrdiff_t>(pos), in.end());

  if (const DhcpOption* t = m.option(kOptMessageType); t && t->payload.size() == 1 && t->payload[0] >= 1 &&
                                                       t->payload[0] <= 8) {
    m.message_type = static_cast<MessageType>(t->payload[0]);
  }
  return m;
}

std::vector<std::uint8_t> serialize_dhcp_message(const DhcpMessage& m) {
  std::vector<std::uint8_t> out;
  out.reserve(kFixedHeaderSize + 64);
  out.push_back(m.op);
  out.push_back(m.htype);
  out.push_back(m.hlen);
  out.push_back(m.hops);
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(m.xid >> s));
  out.push_back(static_cast<std::uint8_t>(m.secs >> 8));
  out.push_back(static_cast<std::uint8_t>(m.secs));
  out.push_back(static_cast<std::uint8_t>(m.flags >> 8));
  out.push_back(static_cast<std::uint8_t>(m.flags));
  auto put = [&](const auto& arr) { out.insert(out.end(), arr.begin(), arr.end()); };
  put(m.ciaddr);
  put(m.yiaddr);
  put(m.siaddr);
  put(m.giaddr);
  put(m.chaddr);
  put(m.sname);
  put(m.file);
  put(kMagicCookie);
  for (const DhcpOption& o : m.options) {
    out.push_back(o.code);
    if (o.code == kOptPad) continue;
    if (o.payload.size() > 255) throw std::invalid_argument(fmt::format("option {} longer than 255 bytes", o.code));
    out.push_back(static_cast<std::uint8_t>(o.payload.size()));
    put(o.payload);
  }
  out.push_back(kOptEnd);
  put(m.trailing);
  return out;
}

DhcpMessage make_client_message(MessageType type, const std::array<std::uint8_t, 6>& mac, std::uint32_t xid,
                                const std::optional<std::string>& vci) {
  DhcpMessage m;
  m.xid = xid;
  std::copy(mac.begin(), mac.end(), m.chaddr.begin());
  m.options.push_back(DhcpOption{kOptMessageType, {static_cast<std::uint8_t>(type)}});
  if (vci) m.options.push_back(DhcpOption{kOptVendorClass, std::vector<std::uint8_t>(vci->begin(), vci->end())});
  m.message_type = type;
  return m;
}

std::string format_mac(const std::array<std::uint8_t, 6>& mac) {
  return fmt::format("{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}", mac[0], mac[1], mac[2], mac[3], mac[4], mac[5]);
}

std::optional<std::array<std::uint8_t, 6>> parse_mac(std::string_view text) {
  if (text.size() != 17) return std::nullopt;
  std::array<std::uint8_t, 6> mac{};
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  for (std::size_t i = 0; i < 6; ++i) {
    const int hi = hex(text[i * 3]), lo = hex(text[i * 3 + 1]);
    if (hi < 0 || lo < 0 || (i < 5 && text[i * 3 + 2] != ':')) return std::nullopt;
    mac[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return mac;
}

}  // namespace ndntb::discovery
