#include "ndntb/discovery/lease.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ndntb::discovery {

std::string_view to_string(OsType os) {
  switch (os) {
    case OsType::ubuntu: return "ubuntu";
    case OsType::mac: return "mac";
    case OsType::pi: return "pi";
    case OsType::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<OsType> parse_os_type(std::string_view text) {
  for (OsType os : {OsType::ubuntu, OsType::mac, OsType::pi, OsType::unknown}) {
    if (to_string(os) == text) return os;
  }
  return std::nullopt;
}

OsType os_type_from_vci(std::string_view vci) {
  std::string lower(vci);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  auto starts = [&](std::string_view p) { return lower.rfind(p, 0) == 0; };
  if (starts("ubuntu")) return OsType::ubuntu;
  if (starts("mac")) return OsType::mac;
  if (starts("pi") || starts("raspb")) return OsType::pi;
  return OsType::unknown;
}

std::string format_ipv4(Ipv4 ip) {
  return fmt::format("{}.{}.{}.{}", ip >> 24, (ip >> 16) & 0xff, (ip >> 8) & 0xff, ip & 0xff);
}

std::optional<Ipv4> parse_ipv4(std::string_view text) {
  Ipv4 ip = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 4; ++i) {
    unsigned octet = 0;
    auto [next, ec] = std::from_chars(p, end, octet);
    if (ec != std::errc{} || octet > 255 || next == p || next - p > 3) return std::nullopt;
    ip = (ip << 8) | octet;
    p = next;
    if (i < 3) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
  }
  if (p != end) return std::nullopt;
  return ip;
}

std::string lease_to_json(const LeaseRecord& l) {
  nlohmann::ordered_json j;
  j["mac"] = format_mac(l.mac);
  j["ip"] = format_ipv4(l.ip);
  j["vci"] = l.vci;
  j["os_type"] = std::string(to_string(l.os_type));
  j["issued_at"] = format_rfc3339(l.issued_at);
  return j.dump();
}

LeaseRecord lease_from_json(std::string_view line) {
  auto bad = [&](const std::string& why) { return LeaseError(LeaseErrc::bad_lease_file, why); };
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw bad("lease line is not a JSON object");
  auto str = [&](const char* k) {
    if (!j.contains(k) || !j.at(k).is_string()) throw bad(fmt::format("lease field '{}' missing", k));
    return j.at(k).get<std::string>();
  };
  LeaseRecord l;
  const auto mac = parse_mac(str("mac"));
  const auto ip = parse_ipv4(str("ip"));
  const auto os = parse_os_type(str("os_type"));
  const auto at = parse_rfc3339(str("issued_at"));
  if (!mac || !ip || !os || !at) throw bad(fmt::format("invalid lease: {}", line));
  l.mac = *mac;
  l.ip = *ip;
  l.vci = str("vci");
  l.os_type = *os;
  l.issued_at = *at;
  return l;
}

LeaseRegistry::LeaseRegistry(LeaseRegistry&& other) noexcept : pool_(other.pool_) {
  std::lock_guard lock(other.mu_);
  leases_ = std::move(other.leases_);
}

LeaseRegistry& LeaseRegistry::operator=(LeaseRegistry&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    pool_ = other.pool_;
    leases_ = std::move(other.leases_);
  }
  return *this;
}

LeaseRecord LeaseRegistry::handle_discover(const DhcpMessage& msg, TimeUs now) {
  if (msg.message_type != MessageType::discover && msg.message_type != MessageType::request) {
    throw LeaseError(LeaseErrc::unsupported_message, "only DISCOVER and REQUEST are handled");
  }
  const auto mac = msg.mac();
  const std::string vci = msg.vendor_class();

  std::lock_guard lock(mu_);
  for (LeaseRecord& l : leases_) {
    if (l.mac == mac) {
      l.issued_at = now;
      l.vci = vci;
      l.os_type = os_type_from_vci(vci);
      return l;
    }
  }
  // leases_ is sorted by address, so the first gap is the lowest free one.
  Ipv4 candidate = pool_.first;
  for (const LeaseRecord& l : leases_) {
    if (l.ip < candidate) continue;
    if (l.ip != candidate) break;
    ++candidate;
  }
  if (!pool_.contains(candidate) || pool_.size() == 0) {
    throw LeaseError(LeaseErrc::pool_exhausted,
                     fmt::format("no free address in {}-{}", format_ipv4(pool_.first), format_ipv4(pool_.last)));
  }
  LeaseRecord lease{mac, candidate, vci, os_type_from_vci(vci), now};
  insert_locked(lease);
  return lease;
}

void LeaseRegistry::insert_locked(LeaseRecord lease) {
  auto pos = std::lower_bound(leases_.begin(), leases_.end(), lease.ip,
                              [](const LeaseRecord& l, Ipv4 ip) { return l.ip < ip; });
  leases_.insert(pos, std::move(lease));
}

std::optional<LeaseRecord> LeaseRegistry::find(const std::array<std::uint8_t, 6>& mac) const {
  std::lock_guard lock(mu_);
  for (const LeaseRecord& l : leases_) {
    if (l.mac == mac) return l;
  }
  return std::nullopt;
}

std::vector<LeaseRecord> LeaseRegistry::leases() const {
  std::lock_guard lock(mu_);
  return leases_;
}

std::size_t LeaseRegistry::size() const {
  std::lock_guard lock(mu_);
  return leases_.size();
}

std::string LeaseRegistry::to_json_lines() const {
  std::string out;
  for (const LeaseRecord& l : leases()) out += lease_to_json(l) + "\n";
  return out;
}

LeaseRegistry LeaseRegistry::from_json_lines(std::string_view text, AddressPool pool) {
  LeaseRegistry reg(pool);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    LeaseRecord l = lease_from_json(line);
    if (!pool.contains(l.ip)) throw LeaseError(LeaseErrc::bad_lease_file, fmt::format("{} outside pool", format_ipv4(l.ip)));
    for (const LeaseRecord& other : reg.leases_) {
      if (other.ip == l.ip || other.mac == l.mac) {
        throw LeaseError(LeaseErrc::bad_lease_file, fmt::format("duplicate lease for {}", format_mac(l.mac)));
      }
    }
    reg.insert_locked(std::move(l));
  }
  return reg;
}

void LeaseRegistry::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << to_json_lines();
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

LeaseRegistry LeaseRegistry::load(const std::filesystem::path& path, AddressPool pool) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return LeaseRegistry(pool);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_lines(ss.str(), pool);
}

}  // namespace ndntb::discovery
