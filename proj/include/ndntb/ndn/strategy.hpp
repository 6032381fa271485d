#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ndntb/ndn/tables.hpp"

namespace ndntb::ndn {

enum class Strategy { best_route, multicast };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

/// Faces an interest arriving on `in_face` goes out on.
///   best_route: the cheapest next hop other than `in_face` (ties: lowest face id)
///   multicast:  every next hop other than `in_face`, cheapest first
/// An empty result means the interest dies here.
std::vector<FaceId> strategy_select(Strategy strategy, const FibEntry& entry, FaceId in_face);

}  // namespace ndntb::ndn
