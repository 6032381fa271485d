#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ndntb/ndn/forwarder.hpp"

using namespace ndntb::ndn;

namespace {

struct Router {
  Forwarder fwd;
  FaceId f1, f2, f9, up1, up2;

  explicit Router(Strategy s = Strategy::best_route, std::size_t cs_capacity = 1000)
      : fwd(ndntb::topo::NodeId{0, "R1"}, ForwarderConfig{s, kDefaultPitLifetimeUs, cs_capacity}) {
    f1 = fwd.add_face("C0", FaceKind::ethernet);
    f2 = fwd.add_face("C1", FaceKind::ethernet);
    f9 = fwd.add_face("C9", FaceKind::ethernet);
    up1 = fwd.add_face("R3", FaceKind::ethernet);
    up2 = fwd.add_face("R2", FaceKind::ethernet);
    fwd.add_route(Name::parse("/testbed/P5"), up1, 11);
    fwd.add_route(Name::parse("/testbed/P5"), up2, 41);
  }
};

Interest interest(const std::string& uri, std::uint32_t nonce, std::uint8_t hop = kDefaultHopLimit) {
  return Interest{Name::parse(uri), nonce, hop, 0};
}

Data data(const std::string& uri) { return Data{Name::parse(uri), 1250, 0}; }

}  // namespace

TEST_CASE("strategy_select") {
  FibEntry e{Name::parse("/p"), {{FaceId{1}, 5}, {FaceId{2}, 20}}};
  CHECK(strategy_select(Strategy::best_route, e, FaceId{9}) == std::vector<FaceId>{FaceId{1}});
  CHECK(strategy_select(Strategy::multicast, e, FaceId{2}) == std::vector<FaceId>{FaceId{1}});
  CHECK(strategy_select(Strategy::multicast, e, FaceId{9}) == std::vector<FaceId>{FaceId{1}, FaceId{2}});

  FibEntry single{Name::parse("/p"), {{FaceId{1}, 5}}};
  CHECK(strategy_select(Strategy::best_route, single, FaceId{1}).empty());
  CHECK(strategy_select(Strategy::multicast, single, FaceId{1}).empty());

  FibEntry tie{Name::parse("/p"), {{FaceId{4}, 5}, {FaceId{3}, 5}}};
  CHECK(strategy_select(Strategy::best_route, tie, FaceId{9}) == std::vector<FaceId>{FaceId{3}});
  // Best route excludes the incoming face first, then picks the cheapest.
  CHECK(strategy_select(Strategy::best_route, e, FaceId{1}) == std::vector<FaceId>{FaceId{2}});

  CHECK(parse_strategy("best_route") == Strategy::best_route);
  CHECK(parse_strategy("multicast") == Strategy::multicast);
  CHECK_FALSE(parse_strategy("self_learning").has_value());
}

TEST_CASE("on_interest: aggregation of same-name interests") {
  Router r;
  auto first = r.fwd.on_interest(interest("/testbed/P5/seg/0", 1), r.f1, 0);
  auto second = r.fwd.on_interest(interest("/testbed/P5/seg/0", 2), r.f2, 10);
  CHECK(first.outcome == InterestOutcome::forwarded);
  CHECK(first.interests.size() == 1);
  CHECK(second.outcome == InterestOutcome::aggregated);
  CHECK(second.interests.empty());
  const PitEntry* e = r.fwd.pit().find(Name::parse("/testbed/P5/seg/0"));
  REQUIRE(e != nullptr);
  CHECK(e->in_faces == std::vector<FaceId>{r.f1, r.f2});

  auto sat = r.fwd.on_data(data("/testbed/P5/seg/0"), r.up1, 20);
  CHECK(sat.solicited);
  REQUIRE(sat.data.size() == 2);
  CHECK(sat.data[0].first == r.f1);
  CHECK(sat.data[1].first == r.f2);
  CHECK(r.fwd.pit().size() == 0);
  CHECK(r.fwd.cs().contains(Name::parse("/testbed/P5/seg/0")));
}

TEST_CASE("on_interest: content store hit answers immediately") {
  Router r;
  r.fwd.on_interest(interest("/testbed/P5/seg/0", 1), r.f1, 0);
  r.fwd.on_data(data("/testbed/P5/seg/0"), r.up1, 5);

  auto hit = r.fwd.on_interest(interest("/testbed/P5/seg/0", 7), r.f2, 6);
  CHECK(hit.outcome == InterestOutcome::cs_hit);
  CHECK(hit.interests.empty());
  REQUIRE(hit.data.size() == 1);
  CHECK(hit.data[0].first == r.f2);
  CHECK(r.fwd.pit().size() == 0);
  CHECK(r.fwd.counters().cs_hits == 1);
}

TEST_CASE("on_interest: hop limit exhaustion") {
  Router r;
  auto res = r.fwd.on_interest(interest("/testbed/P5/seg/0", 1, 1), r.f1, 0);
  CHECK(res.outcome == InterestOutcome::hop_limit_exhausted);
  CHECK(res.interests.empty());
  CHECK(r.fwd.pit().size() == 0);

  auto ok = r.fwd.on_interest(interest("/testbed/P5/seg/1", 1, 2), r.f1, 0);
  REQUIRE(ok.interests.size() == 1);
  CHECK(ok.interests[0].second.hop_limit == 1);
}

TEST_CASE("on_interest: duplicate nonce is dropped") {
  Router r;
  r.fwd.on_interest(interest("/testbed/P5/seg/0", 42), r.f1, 0);
  auto dup = r.fwd.on_interest(interest("/testbed/P5/seg/0", 42), r.f2, 1);
  CHECK(dup.outcome == InterestOutcome::duplicate);
  CHECK(dup.interests.empty());
  CHECK(r.fwd.counters().duplicate_nonce == 1);
  CHECK(r.fwd.pit().find(Name::parse("/testbed/P5/seg/0"))->in_faces.size() == 1);
}

TEST_CASE("on_interest: unroutable") {
  Router r;
  auto res = r.fwd.on_interest(interest("/other/x", 1), r.f1, 0);
  CHECK(res.outcome == InterestOutcome::unroutable);
  CHECK(r.fwd.counters().unroutable == 1);
  CHECK(r.fwd.pit().size() == 0);
}

TEST_CASE("on_interest: multicast fans out except on the incoming face") {
  Router r(Strategy::multicast);
  auto res = r.fwd.on_interest(interest("/testbed/P5/seg/0", 1), r.f1, 0);
  REQUIRE(res.interests.size() == 2);
  CHECK(res.interests[0].first == r.up1);
  CHECK(res.interests[1].first == r.up2);

  auto back = r.fwd.on_interest(interest("/testbed/P5/seg/9", 2), r.up2, 0);
  REQUIRE(back.interests.size() == 1);
  CHECK(back.interests[0].first == r.up1);
}

TEST_CASE("on_interest: expired PIT entry does not aggregate") {
  Router r;
  r.fwd.on_interest(interest("/testbed/P5/seg/0", 1), r.f1, 0);
  auto again = r.fwd.on_interest(interest("/testbed/P5/seg/0", 2), r.f1, kDefaultPitLifetimeUs);
  CHECK(again.outcome == InterestOutcome::forwarded);
  CHECK(r.fwd.counters().pit_timeouts == 1);
}

TEST_CASE("on_data: unsolicited") {
  Router r;
  auto res = r.fwd.on_data(data("/testbed/P5/seg/0"), r.up1, 0);
  CHECK_FALSE(res.solicited);
  CHECK(res.data.empty());
  CHECK(r.fwd.counters().unsolicited_data == 1);
  CHECK_FALSE(r.fwd.cs().contains(Name::parse("/testbed/P5/seg/0")));
}

TEST_CASE("on_data: CS eviction when full") {
  Router r(Strategy::best_route, 2);
  for (const char* n : {"/testbed/P5/A", "/testbed/P5/B", "/testbed/P5/C"}) {
    r.fwd.on_interest(interest(n, 1), r.f1, 0);
  }
  r.fwd.on_data(data("/testbed/P5/A"), r.up1, 1);
  r.fwd.on_data(data("/testbed/P5/B"), r.up1, 2);
  r.fwd.on_data(data("/testbed/P5/C"), r.up1, 3);
  CHECK(r.fwd.cs().size() == 2);
  CHECK(r.fwd.cs().names_by_recency() ==
        std::vector<Name>{Name::parse("/testbed/P5/C"), Name::parse("/testbed/P5/B")});
}

TEST_CASE("pit_sweep counts timeouts") {
  Router r;
  r.fwd.on_interest(interest("/testbed/P5/a", 1), r.f1, 0);
  r.fwd.on_interest(interest("/testbed/P5/b", 1), r.f1, 100);
  CHECK(r.fwd.pit_sweep(kDefaultPitLifetimeUs) == 1);
  CHECK(r.fwd.pit().size() == 1);
  CHECK(r.fwd.counters().pit_timeouts == 1);
}

TEST_CASE("aggregation property: k interests, one upstream, k deliveries") {
  for (std::size_t k : {1u, 2u, 5u, 10u, 31u}) {
    Forwarder fwd(ndntb::topo::NodeId{0, "R"});
    std::vector<FaceId> downstream;
    for (std::size_t i = 0; i < k; ++i) downstream.push_back(fwd.add_face("d", FaceKind::ethernet));
    const FaceId up = fwd.add_face("u", FaceKind::ethernet);
    fwd.add_route(Name::parse("/x"), up, 1);

    std::size_t upstream = 0;
    for (std::size_t i = 0; i < k; ++i) {
      upstream += fwd.on_interest(interest("/x/y", static_cast<std::uint32_t>(i + 100)), downstream[i], 0)
                      .interests.size();
    }
    CHECK(upstream == 1);
    CHECK(fwd.on_data(data("/x/y"), up, 1).data.size() == k);
  }
}

TEST_CASE("random event sequences respect forwarder invariants") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    const Strategy strategy = seed % 2 ? Strategy::multicast : Strategy::best_route;
    const std::size_t capacity = 1 + rng() % 4;
    Forwarder fwd(ndntb::topo::NodeId{0, "R"}, ForwarderConfig{strategy, 50, capacity});
    std::vector<FaceId> faces;
    for (int i = 0; i < 4; ++i) faces.push_back(fwd.add_face("n", FaceKind::ethernet));
    fwd.add_route(Name::parse("/x"), faces[2], 1);
    fwd.add_route(Name::parse("/x"), faces[3], 2);

    std::map<std::pair<std::string, std::uint32_t>, int> forwarded_nonces;
    ndntb::TimeUs now = 0;
    for (int step = 0; step < 400; ++step) {
      now += static_cast<ndntb::TimeUs>(rng() % 5);
      const std::string uri = "/x/" + std::to_string(rng() % 6);
      const FaceId face = faces[rng() % faces.size()];
      if (rng() % 3) {
        const auto nonce = static_cast<std::uint32_t>(rng() % 8);
        // Nonce memory lives in the PIT entry; a fresh entry starts clean.
        const PitEntry* live = fwd.pit().find(Name::parse(uri));
        if (live == nullptr || live->expiry <= now) std::erase_if(forwarded_nonces, [&](const auto& kv) {
          return kv.first.first == uri;
        });
        auto res = fwd.on_interest(interest(uri, nonce), face, now);
        for (const auto& [out, pkt] : res.interests) {
          CHECK(out != face);
          CHECK(++forwarded_nonces[{uri, nonce}] <= (strategy == Strategy::multicast ? 2 : 1));
        }
        if (strategy == Strategy::best_route) CHECK(res.interests.size() <= 1);
        if (res.outcome == InterestOutcome::duplicate) CHECK(res.interests.empty());
      } else {
        const bool pending = fwd.pit().find(Name::parse(uri)) != nullptr;
        auto res = fwd.on_data(data(uri), face, now);
        if (!pending) CHECK(res.data.empty());
      }
      CHECK(fwd.cs().size() <= capacity);
      for (const PitEntry* e : fwd.pit().entries()) CHECK_FALSE(e->in_faces.empty());
      if (rng() % 50 == 0) fwd.pit_sweep(now);
    }
  }
}
