#pragma once

#include <cstdint>

#include "ndntb/ndn/name.hpp"
#include "ndntb/util/time.hpp"

namespace ndntb::ndn {

constexpr std::uint8_t kDefaultHopLimit = 32;

struct Interest {
  Name name;
  std::uint32_t nonce = 0;
  std::uint8_t hop_limit = kDefaultHopLimit;
  TimeUs issued_at = 0;
};

struct Data {
  Name name;
  std::uint32_t payload_size = 0;
  TimeUs produced_at = 0;
};

}  // namespace ndntb::ndn
