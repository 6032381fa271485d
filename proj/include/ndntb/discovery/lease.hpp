#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndntb/discovery/dhcp.hpp"
#include "ndntb/util/time.hpp"

namespace ndntb::discovery {

enum class OsType { ubuntu, mac, pi, unknown };

std::string_view to_string(OsType os);
std::optional<OsType> parse_os_type(std::string_view text);

/// Case-insensitive prefix match on the vendor class: "ubuntu", "mac",
/// "pi" or "raspb"; anything else is unknown.
OsType os_type_from_vci(std::string_view vci);

using Ipv4 = std::uint32_t;

std::string format_ipv4(Ipv4 ip);
std::optional<Ipv4> parse_ipv4(std::string_view text);

struct AddressPool {
  Ipv4 first = (10u << 24) | 10u;   // 10.0.0.10
  Ipv4 last = (10u << 24) | 250u;   // 10.0.0.250
  std::size_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool contains(Ipv4 ip) const noexcept { return ip >= first && ip <= last; }
};

struct LeaseRecord {
  std::array<std::uint8_t, 6> mac{};
  Ipv4 ip = 0;
  std::string vci;
  OsType os_type = OsType::unknown;
  TimeUs issued_at = 0;

  friend bool operator==(const LeaseRecord&, const LeaseRecord&) = default;
};

enum class LeaseErrc { pool_exhausted, unsupported_message, bad_lease_file };

class LeaseError : public std::runtime_error {
 public:
  LeaseError(LeaseErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  LeaseErrc kind() const noexcept { return kind_; }

 private:
  LeaseErrc kind_;
};

/// {"mac":"aa:..","ip":"10.0.0.10","vci":"ubuntu","os_type":"ubuntu","issued_at":"<RFC 3339>"}
std::string lease_to_json(const LeaseRecord& lease);
LeaseRecord lease_from_json(std::string_view line);

/// Active leases keyed by MAC. Mutations are serialized internally;
/// `leases()` returns a copy.
class LeaseRegistry {
 public:
  explicit LeaseRegistry(AddressPool pool = {}) : pool_(pool) {}
  LeaseRegistry(LeaseRegistry&& other) noexcept;
  LeaseRegistry& operator=(LeaseRegistry&& other) noexcept;

  const AddressPool& pool() const noexcept { return pool_; }

  /// DISCOVER or REQUEST. A known MAC keeps its address (issued_at and vci
  /// refreshed); a new one gets the lowest free address.
  LeaseRecord handle_discover(const DhcpMessage& msg, TimeUs now);

  std::optional<LeaseRecord> find(const std::array<std::uint8_t, 6>& mac) const;
  /// Ordered by address.
  std::vector<LeaseRecord> leases() const;
  std::size_t size() const;

  /// Line-delimited JSON, one lease per line, ordered by address.
  std::string to_json_lines() const;
  static LeaseRegistry from_json_lines(std::string_view text, AddressPool pool = {});
  void save(const std::filesystem::path& path) const;
  static LeaseRegistry load(const std::filesystem::path& path, AddressPool pool = {});

 private:
  void insert_locked(LeaseRecord lease);

  AddressPool pool_;
  mutable std::mutex mu_;
  std::vector<LeaseRecord> leases_;  // sorted by ip
};

}  // namespace ndntb::discovery
