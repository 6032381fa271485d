#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "ndntb/discovery/dhcp.hpp"
#include "ndntb/discovery/dhcp_listener.hpp"
#include "ndntb/discovery/lease.hpp"
#include "ndntb/discovery/provisioning.hpp"
#include "support/dhcp_vectors.hpp"
#include "support/fixtures.hpp"

using namespace ndntb;
using namespace ndntb::discovery;

namespace {

DhcpErrc parse_error(const vectors::Bytes& b) {
  try {
    parse_dhcp_message(b);
  } catch (const DhcpParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return DhcpErrc::too_short;
}

std::array<std::uint8_t, 6> mac_n(std::uint32_t n) {
  return {0x02, 0x00, static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
          static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
}

void check_registry_invariants(const LeaseRegistry& reg) {
  std::set<Ipv4> ips;
  std::set<std::array<std::uint8_t, 6>> macs;
  for (const auto& l : reg.leases()) {
    CHECK(ips.insert(l.ip).second);
    CHECK(macs.insert(l.mac).second);
    CHECK(reg.pool().contains(l.ip));
  }
}

}  // namespace

TEST_CASE("option 60 maps to os type") {
  struct Case {
    const char* vci;
    OsType os;
  };
  for (const Case& c : {Case{"ubuntu", OsType::ubuntu}, Case{"mac", OsType::mac}, Case{"pi", OsType::pi}}) {
    const auto msg = parse_dhcp_message(vectors::discover(vectors::kMacA, c.vci));
    CHECK(msg.vendor_class() == c.vci);
    CHECK(os_type_from_vci(msg.vendor_class()) == c.os);
    REQUIRE(msg.message_type);
    CHECK(*msg.message_type == MessageType::discover);
    CHECK(msg.xid == 0x3903f326);
    CHECK(format_mac(msg.mac()) == "02:00:00:00:00:0a");
  }
  const auto bare = parse_dhcp_message(vectors::discover(vectors::kMacA));
  CHECK(bare.vendor_class().empty());
  CHECK(os_type_from_vci(bare.vendor_class()) == OsType::unknown);
}

TEST_CASE("vci mapping is a case-insensitive prefix match") {
  CHECK(os_type_from_vci("Ubuntu-22.04") == OsType::ubuntu);
  CHECK(os_type_from_vci("MACOS") == OsType::mac);
  CHECK(os_type_from_vci("Raspbian") == OsType::pi);
  CHECK(os_type_from_vci("PiOS") == OsType::pi);
  CHECK(os_type_from_vci("MSFT 5.0") == OsType::unknown);
  CHECK(os_type_from_vci("") == OsType::unknown);
}

TEST_CASE("malformed datagrams give typed errors") {
  CHECK(parse_error(vectors::truncated_vci()) == DhcpErrc::truncated_option);
  CHECK(parse_error(vectors::truncated_length()) == DhcpErrc::truncated_option);
  CHECK(parse_error(vectors::no_terminator()) == DhcpErrc::missing_terminator);
  CHECK(parse_error(vectors::no_cookie()) == DhcpErrc::missing_cookie);
  CHECK(parse_error(vectors::Bytes(239, 0)) == DhcpErrc::too_short);
  CHECK(parse_error({}) == DhcpErrc::too_short);
}

TEST_CASE("serialization is byte-exact including pads and trailing bytes") {
  auto b = vectors::header(vectors::kMacC);
  b.insert(b.end(), {53, 1, 3, 0, 0, 60, 4, 'p', 'i', '4', 'b', 12, 3, 'n', '0', '1', 0, 255, 0, 0, 0});
  const auto msg = parse_dhcp_message(b);
  CHECK(msg.options.size() == 6);  // 53, pad, pad, 60, 12, pad
  CHECK(msg.trailing.size() == 3);
  CHECK(*msg.message_type == MessageType::request);
  CHECK(serialize_dhcp_message(msg) == b);

  for (const char* v : {"ubuntu", "mac", "pi", ""}) {
    const auto d = vectors::discover(vectors::kMacB, v);
    CHECK(serialize_dhcp_message(parse_dhcp_message(d)) == d);
  }
  const auto built = make_client_message(MessageType::discover, parse_mac("02:00:00:00:00:0a").value(), 0x3903f326,
                                         std::string("ubuntu"));
  CHECK(serialize_dhcp_message(built) == vectors::discover(vectors::kMacA, "ubuntu"));
}

TEST_CASE("random option lists round-trip") {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    auto b = vectors::header(vectors::kMacA, static_cast<std::uint32_t>(rng()));
    const int n = static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const std::uint8_t code = static_cast<std::uint8_t>(rng() % 255);
      b.push_back(code);
      if (code == 0) continue;
      const std::uint8_t len = static_cast<std::uint8_t>(rng() % 20);
      b.push_back(len);
      for (int k = 0; k < len; ++k) b.push_back(static_cast<std::uint8_t>(rng()));
    }
    b.push_back(255);
    for (unsigned k = 0; k < rng() % 4; ++k) b.push_back(0);
    CHECK(serialize_dhcp_message(parse_dhcp_message(b)) == b);
  }
}

TEST_CASE("random bytes never crash the parser") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 2000; ++iter) {
    auto b = vectors::header(vectors::kMacA);
    const std::size_t extra = rng() % 40;
    for (std::size_t k = 0; k < extra; ++k) b.push_back(static_cast<std::uint8_t>(rng()));
    try {
      const auto msg = parse_dhcp_message(b);
      CHECK(serialize_dhcp_message(msg) == b);
    } catch (const DhcpParseError&) {
    }
  }
}

TEST_CASE("lease allocation") {
  LeaseRegistry reg;
  const auto a = reg.handle_discover(parse_dhcp_message(vectors::discover(vectors::kMacA, "ubuntu")), 100);
  CHECK(format_ipv4(a.ip) == "10.0.0.10");
  CHECK(a.os_type == OsType::ubuntu);
  const auto b = reg.handle_discover(parse_dhcp_message(vectors::discover(vectors::kMacB, "pi")), 200);
  CHECK(format_ipv4(b.ip) == "10.0.0.11");

  const auto again = reg.handle_discover(parse_dhcp_message(vectors::discover(vectors::kMacA, "ubuntu")), 300);
  CHECK(again.ip == a.ip);
  CHECK(again.issued_at == 300);
  CHECK(reg.size() == 2);
  check_registry_invariants(reg);

  auto offer = parse_dhcp_message(vectors::discover(vectors::kMacC));
  offer.message_type = MessageType::offer;
  CHECK_THROWS_AS(reg.handle_discover(offer, 0), LeaseError);
}

TEST_CASE("pool exhaustion") {
  LeaseRegistry reg;
  CHECK(reg.pool().size() == 241);
  for (std::uint32_t i = 0; i < 241; ++i) {
    reg.handle_discover(make_client_message(MessageType::discover, mac_n(i), i, std::nullopt), i);
  }
  check_registry_invariants(reg);
  CHECK(format_ipv4(reg.leases().back().ip) == "10.0.0.250");
  try {
    reg.handle_discover(make_client_message(MessageType::discover, mac_n(241), 0, std::nullopt), 0);
    FAIL("expected pool exhaustion");
  } catch (const LeaseError& e) {
    CHECK(e.kind() == LeaseErrc::pool_exhausted);
  }
}

TEST_CASE("replaying a discover sequence yields the same table") {
  auto replay = [] {
    LeaseRegistry reg(AddressPool{parse_ipv4("10.0.0.10").value(), parse_ipv4("10.0.0.40").value()});
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
      try {
        reg.handle_discover(make_client_message(MessageType::discover, mac_n(rng() % 40), 0, "pi"), i);
      } catch (const LeaseError&) {
      }
      check_registry_invariants(reg);
    }
    return reg.to_json_lines();
  };
  CHECK(replay() == replay());
}

TEST_CASE("lease file round trip") {
  LeaseRegistry reg;
  reg.handle_discover(parse_dhcp_message(vectors::discover(vectors::kMacA, "ubuntu")), kEmulationEpochUs);
  reg.handle_discover(parse_dhcp_message(vectors::discover(vectors::kMacC, "Raspbian")), kEmulationEpochUs + 1500000);
  const std::string text = reg.to_json_lines();
  CHECK(text.substr(0, text.find('\n')) ==
        R"({"mac":"02:00:00:00:00:0a","ip":"10.0.0.10","vci":"ubuntu","os_type":"ubuntu","issued_at":"2024-01-01T00:00:00.000000Z"})");

  const auto path = std::filesystem::temp_directory_path() / "ndntb_leases.jsonl";
  reg.save(path);
  const auto loaded = LeaseRegistry::load(path);
  CHECK(loaded.leases() == reg.leases());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(LeaseRegistry::from_json_lines("{\"mac\":1}\n"), LeaseError);
  CHECK_THROWS_AS(LeaseRegistry::from_json_lines(text + text), LeaseError);
}

TEST_CASE("provisioning plans") {
  const auto topo = fixtures::diamond();
  const auto configs = topo::compile_node_configs(topo);
  const auto& r1 = configs.at(*topo.index_of("R1"));
  LeaseRecord lease{{2, 0, 0, 0, 0, 1}, parse_ipv4("10.0.0.11").value(), "ubuntu", OsType::ubuntu, 0};

  const auto plan = emit_provisioning_plan(lease, r1);
  REQUIRE(plan.tasks.size() == 4);
  CHECK(plan.tasks[0].kind == TaskKind::install_forwarder);
  CHECK(plan.tasks[1].kind == TaskKind::configure_faces);
  CHECK(plan.tasks[2].kind == TaskKind::install_routes);
  CHECK(plan.tasks[3].kind == TaskKind::set_log_sink);
  CHECK(plan.tasks[2].ndn_routes.size() == 5);
  CHECK(plan.tasks[2].ndn_routes == r1.ndn_routes);
  CHECK(plan.tasks[1].faces.size() == 3);
  CHECK(plan.tasks[3].log_sink == "10.0.0.1:514");
  CHECK(plan.tags.empty());

  const auto single = topo::compile_node_configs(topo::parse_adjacency("[[null]]"));
  lease.os_type = OsType::unknown;
  const auto lone = emit_provisioning_plan(lease, single.at(0));
  CHECK(lone.tasks.size() == 4);
  CHECK(lone.tasks[2].ndn_routes.empty());
  CHECK(lone.tags == std::vector<std::string>{"manual-review"});
  CHECK(plan_to_json(lone).find("\"manual-review\"") != std::string::npos);
  CHECK(plan_to_json(plan).find("\"install-routes\"") != std::string::npos);
}

TEST_CASE("listener admits nodes over UDP") {
  LeaseRegistry reg;
  DhcpListener listener(reg, "127.0.0.1", 0);
  auto sock = UdpSocket::open();
  sock.send_to("127.0.0.1", listener.port(), vectors::discover(vectors::kMacA, "mac"));
  sock.send_to("127.0.0.1", listener.port(), vectors::truncated_vci());
  for (int i = 0; i < 100 && listener.accepted() + listener.rejected() < 2; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  listener.stop();
  CHECK(listener.accepted() == 1);
  CHECK(listener.rejected() == 1);
  REQUIRE(reg.size() == 1);
  CHECK(reg.leases()[0].os_type == OsType::mac);
}
