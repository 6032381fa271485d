#include "ndntb/ndn/strategy.hpp"

#include <algorithm>

namespace ndntb::ndn {

std::string_view to_string(Strategy s) { return s == Strategy::best_route ? "best_route" : "multicast"; }

std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "best_route" || text == "best-route") return Strategy::best_route;
  if (text == "multicast") return Strategy::multicast;
  return std::nullopt;
}

std::vector<FaceId> strategy_select(Strategy strategy, const FibEntry& entry, FaceId in_face) {
  std::vector<NextHop> hops;
  hops.reserve(entry.next_hops.size());
  for (const NextHop& h : entry.next_hops) {
    if (h.face != in_face) hops.push_back(h);
  }
  std::sort(hops.begin(), hops.end(), [](const NextHop& a, const NextHop& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.face < b.face;
  });

  std::vector<FaceId> out;
  if (hops.empty()) return out;
  if (strategy == Strategy::best_route) {
    out.push_back(hops.front().face);
  } else {
    for (const NextHop& h : hops) out.push_back(h.face);
  }
  return out;
}

}  // namespace ndntb::ndn
