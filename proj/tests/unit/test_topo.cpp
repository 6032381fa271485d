#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ndntb/topo/routing.hpp"
#include "ndntb/topo/topology.hpp"
#include "support/fixtures.hpp"
#include "support/graph_oracle.hpp"

using namespace ndntb::topo;

namespace {

TopoErrc parse_error_kind(const std::string& doc) {
  try {
    parse_adjacency(doc);
  } catch (const TopologyError& e) {
    return e.kind();
  }
  FAIL("expected TopologyError for: " << doc);
  return TopoErrc::malformed;
}

const RouteEntry& route_to(const std::vector<RouteEntry>& routes, const std::string& dest) {
  auto it = std::find_if(routes.begin(), routes.end(), [&](const RouteEntry& r) { return r.destination == dest; });
  REQUIRE(it != routes.end());
  return *it;
}

}  // namespace

TEST_CASE("parse_adjacency: single node without links") {
  const Topology t = parse_adjacency(R"({"matrix": [[null]]})");
  CHECK(t.node_count() == 1);
  CHECK(t.links().empty());
  CHECK(t.node(0).label == "N0");
}

TEST_CASE("parse_adjacency: diamond contains the R3-R4 link") {
  const Topology t = fixtures::diamond();
  CHECK(t.node_count() == 6);
  const auto r3 = t.find("R3").index;
  const auto r4 = t.find("R4").index;
  REQUIRE(t.link(r3, r4).has_value());
  CHECK(t.link(r3, r4)->delay_ms == 5.0);
  CHECK(t.links().size() == 6);
  CHECK(t.connected());
}

TEST_CASE("parse_adjacency: distinct error kinds") {
  CHECK(parse_error_kind(R"({"matrix": [[null, 5], [null, null]]})") == TopoErrc::asymmetric);
  CHECK(parse_error_kind(R"({"matrix": [[null, 5], [4, null]]})") == TopoErrc::asymmetric);
  CHECK(parse_error_kind(R"({"matrix": [[null, 0], [0, null]]})") == TopoErrc::non_positive_delay);
  CHECK(parse_error_kind(R"({"matrix": [[null, -3], [-3, null]]})") == TopoErrc::non_positive_delay);
  CHECK(parse_error_kind(R"({"labels": ["A", "A"], "matrix": [[null, 1], [1, null]]})") ==
        TopoErrc::duplicate_label);
  CHECK(parse_error_kind("not json") == TopoErrc::malformed);
  CHECK(parse_error_kind(R"({"matrix": [[null, 1]]})") == TopoErrc::malformed);
  CHECK(parse_error_kind(R"({"matrix": [[null, "x"], ["x", null]]})") == TopoErrc::malformed);
  CHECK(parse_error_kind(R"({"matrix": [[7]]})") == TopoErrc::malformed);
  CHECK(parse_error_kind(R"({"matrix": []})") == TopoErrc::malformed);
  CHECK(parse_error_kind(R"({"matrix": [[null, 1], [1, null]],
                           "media": [[null, "wired"], ["wireless", null]]})") == TopoErrc::asymmetric);
}

TEST_CASE("parse_adjacency: zero diagonal and media tags") {
  const Topology t = parse_adjacency(
      R"({"labels": ["a", "b"], "matrix": [[0, 2.5], [2.5, 0]], "media": [[null, "wireless"], ["wireless", null]]})");
  REQUIRE(t.link(0, 1).has_value());
  CHECK(t.link(0, 1)->medium == Medium::wireless);
  CHECK(t.link(0, 1)->up);
}

TEST_CASE("parse_adjacency after serialize is identity") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Topology t = oracle::random_graph(seed, 2 + seed % 7, 0.4, 1, 50, seed % 3 != 0);
    CHECK(parse_adjacency(serialize_adjacency(t)) == t);
  }
  const Topology wireless = parse_adjacency(
      R"({"labels": ["a", "b", "c"], "matrix": [[null, 1.25, null], [1.25, null, 3], [null, 3, null]],
          "media": [[null, "wireless", null], ["wireless", null, null], [null, null, null]]})");
  CHECK(parse_adjacency(serialize_adjacency(wireless)) == wireless);
  CHECK(parse_adjacency(serialize_adjacency(fixtures::diamond())) == fixtures::diamond());
}

TEST_CASE("compute_routes: two-node line") {
  const Topology t = parse_adjacency(R"({"labels": ["A", "B"], "matrix": [[null, 3], [3, null]]})");
  const auto routes = compute_routes(t, t.find("A"));
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].destination == "B");
  CHECK(routes[0].next_hop.label == "B");
  CHECK(routes[0].cost == 3.0);
}

TEST_CASE("compute_routes: diamond matches exhaustive path enumeration") {
  const Topology t = fixtures::diamond();
  const auto c0 = t.find("C0");
  const auto r1 = t.find("R1");
  const auto p1 = t.find("P1");

  const oracle::BestPath from_c0 = oracle::brute_force(t, c0.index, p1.index);
  CHECK(from_c0.cost == 12.0);
  CHECK(t.node(from_c0.path[1]).label == "R1");
  const oracle::BestPath from_r1 = oracle::brute_force(t, r1.index, p1.index);
  CHECK(t.node(from_r1.path[1]).label == "R3");

  const auto& c0_route = route_to(compute_routes(t, c0), "P1");
  CHECK(c0_route.cost == 12.0);
  CHECK(c0_route.next_hop.label == "R1");
  CHECK(route_to(compute_routes(t, r1), "P1").next_hop.label == "R3");
}

TEST_CASE("compute_routes: random 6-node graph (seed 42) equals Floyd-Warshall") {
  const Topology t = oracle::random_graph(42, 6, 0.35, 1, 50);
  const oracle::Matrix fw = oracle::floyd_warshall(t);
  for (const NodeId& src : t.nodes()) {
    const auto routes = compute_routes(t, src);
    std::size_t reachable = 0;
    for (std::size_t d = 0; d < t.node_count(); ++d)
      if (d != src.index && fw[src.index][d] != oracle::kInf) ++reachable;
    CHECK(routes.size() == reachable);
    for (const RouteEntry& r : routes) CHECK(r.cost == fw[src.index][t.find(r.destination).index]);
  }
}

TEST_CASE("compute_routes: 100 random graphs equal brute force, including tie-breaks") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 7;
    // Narrow delay range forces plenty of equal-cost ties.
    const Topology t = oracle::random_graph(seed, n, 0.5, 1, 3, seed % 4 != 0);
    for (const NodeId& src : t.nodes()) {
      const auto routes = compute_routes(t, src);
      std::size_t checked = 0;
      for (std::size_t d = 0; d < n; ++d) {
        if (d == src.index) continue;
        const oracle::BestPath best = oracle::brute_force(t, src.index, d);
        if (best.cost == oracle::kInf) continue;
        const RouteEntry& r = route_to(routes, t.node(d).label);
        CHECK(r.cost == best.cost);
        CHECK(r.next_hop.index == best.path[1]);
        ++checked;
      }
      CHECK(routes.size() == checked);
    }
  }
}

TEST_CASE("compute_routes: next hop is always a direct neighbor") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Topology t = oracle::random_graph(seed, 8, 0.3, 1, 50);
    for (const NodeId& src : t.nodes())
      for (const RouteEntry& r : compute_routes(t, src)) CHECK(t.link(src.index, r.next_hop.index).has_value());
  }
}

TEST_CASE("compute_routes: costs are invariant under node relabeling") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const Topology t = oracle::random_graph(seed, n, 0.4, 1, 50);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    // perm[i] is the new index of old node i.
    std::vector<std::string> labels(n);
    std::vector<std::optional<LinkSpec>> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[perm[i]] = t.node(i).label;
      for (std::size_t j = 0; j < n; ++j) m[perm[i] * n + perm[j]] = t.link(i, j);
    }
    const Topology p = Topology::build(labels, m);
    for (const NodeId& src : t.nodes()) {
      auto a = compute_routes(t, src);
      auto b = compute_routes(p, p.find(src.label));
      REQUIRE(a.size() == b.size());
      for (const RouteEntry& r : a) CHECK(route_to(b, r.destination).cost == r.cost);
    }
  }
}

TEST_CASE("compute_routes: unknown source") {
  const Topology t = fixtures::diamond();
  CHECK_THROWS_AS(compute_routes(t, NodeId{17, "X"}), TopologyError);
  CHECK_THROWS_AS(compute_routes(t, NodeId{0, "R1"}), TopologyError);
}

TEST_CASE("compute_routes: disconnected graph omits unreachable nodes") {
  const Topology t =
      parse_adjacency(R"({"labels": ["a", "b", "c"], "matrix": [[null, 1, null], [1, null, null], [null, null, null]]})");
  CHECK_FALSE(t.connected());
  CHECK(compute_routes(t, t.find("a")).size() == 1);
  CHECK(compute_routes(t, t.find("c")).empty());
}

TEST_CASE("apply_link_state") {
  const Topology t = fixtures::diamond();
  const NodeId& r3 = t.find("R3");
  const NodeId& r4 = t.find("R4");

  SUBCASE("down link is avoided") {
    const Topology down = apply_link_state(t, r3, r4, false);
    CHECK_FALSE(down.link(r3.index, r4.index)->up);
    CHECK_FALSE(down.link(r4.index, r3.index)->up);
    const auto& route = route_to(compute_routes(down, down.find("C0")), "P1");
    CHECK(route.cost == 42.0);
    CHECK(route_to(compute_routes(down, down.find("R1")), "P1").next_hop.label == "R2");
  }
  SUBCASE("idempotent") {
    const Topology once = apply_link_state(t, r3, r4, false);
    CHECK(apply_link_state(once, r3, r4, false) == once);
  }
  SUBCASE("nonexistent link") {
    try {
      apply_link_state(t, t.find("C0"), t.find("P1"), false);
      FAIL("expected error");
    } catch (const TopologyError& e) {
      CHECK(e.kind() == TopoErrc::no_such_link);
    }
  }
}

TEST_CASE("compile_node_configs") {
  SUBCASE("single node") {
    const auto cfgs = compile_node_configs(parse_adjacency(R"({"matrix": [[null]]})"));
    REQUIRE(cfgs.size() == 1);
    CHECK(cfgs[0].ip_routes.empty());
    CHECK(cfgs[0].ndn_routes.empty());
    CHECK(cfgs[0].faces.empty());
    CHECK(cfgs[0].name_prefix == "/testbed/P0");
  }
  SUBCASE("diamond: C0 reaches P1's prefix through R1") {
    const auto cfgs = compile_node_configs(fixtures::diamond());
    const auto& c0 = cfgs[0];
    CHECK(c0.faces.size() == 1);
    const auto& r = route_to(c0.ndn_routes, "/testbed/P5");
    CHECK(r.next_hop.label == "R1");
    CHECK(r.cost == 12.0);
    CHECK(route_to(c0.ip_routes, "10.0.0.15/32").next_hop.label == "R1");
    CHECK(cfgs[1].ndn_routes.size() == 5);
  }
  SUBCASE("ring of 10") {
    const auto cfgs = compile_node_configs(fixtures::ring(10));
    std::size_t total_ip = 0;
    for (const auto& c : cfgs) {
      CHECK(c.ip_routes.size() == 9);
      CHECK(c.ndn_routes.size() == 9);
      CHECK(c.faces.size() == 2);
      total_ip += c.ip_routes.size();
    }
    CHECK(total_ip == 10 * 9);
  }
  SUBCASE("connected random graphs yield N(N-1) routes") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t n = 1 + seed % 8;
      const auto cfgs = compile_node_configs(oracle::random_graph(seed, n, 0.3, 1, 50));
      std::size_t total = 0;
      for (const auto& c : cfgs) total += c.ip_routes.size();
      CHECK(total == n * (n - 1));
    }
  }
  SUBCASE("wireless links become udp faces") {
    const auto cfgs = compile_node_configs(parse_adjacency(
        R"({"matrix": [[null, 1], [1, null]], "media": [[null, "wireless"], ["wireless", null]]})"));
    CHECK(cfgs[0].faces[0].kind == FaceKind::udp);
  }
}

TEST_CASE("compile_multipath: diamond alternates") {
  const Topology t = fixtures::diamond();
  const auto mp = compile_multipath(t);
  auto hops = [&](const std::string& from, const std::string& to) {
    for (const auto& r : mp[t.find(from).index])
      if (r.destination == t.find(to).index) return r.next_hops;
    FAIL("no route");
    return std::vector<NextHop>{};
  };
  // R1 toward P1: R3 (5 + 6) primary, R2 (20 + 21) alternate.
  const auto r1 = hops("R1", "P1");
  REQUIRE(r1.size() == 2);
  CHECK(t.node(r1[0].neighbor).label == "R3");
  CHECK(r1[0].cost == 11.0);
  CHECK(t.node(r1[1].neighbor).label == "R2");
  CHECK(r1[1].cost == 41.0);
  // R3's only neighbor other than R4 routes back through R3.
  CHECK(hops("R3", "P1").size() == 1);
  // R2 may go back through R1, since R1 reaches P1 via R3.
  const auto r2 = hops("R2", "P1");
  REQUIRE(r2.size() == 2);
  CHECK(t.node(r2[0].neighbor).label == "R4");
  CHECK(r2[1].cost == 31.0);
  CHECK(hops("C0", "P1").size() == 1);
}

TEST_CASE("compile_multipath: primary next hop is always first") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Topology t = oracle::random_graph(seed, 7, 0.4, 1, 4);
    const auto mp = compile_multipath(t);
    for (const NodeId& src : t.nodes()) {
      const auto routes = compute_routes(t, src);
      REQUIRE(routes.size() == mp[src.index].size());
      for (std::size_t k = 0; k < routes.size(); ++k) {
        CHECK(mp[src.index][k].next_hops.front().neighbor == routes[k].next_hop.index);
        CHECK(mp[src.index][k].next_hops.front().cost == routes[k].cost);
      }
    }
  }
}
