#include "ndntb/logrepo/events.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace ndntb::logrepo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(' ', start);
    out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <class T>
std::optional<T> parse_uint(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_ms(std::string_view s) {
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() || !std::isfinite(v) || v < 0) return std::nullopt;
  return v;
}

bool valid_name(std::string_view n) { return n.size() >= 2 && n.front() == '/'; }

}  // namespace

std::string format_event(const Event& e) {
  return std::visit(Overloaded{
                        [](const InterestEvent& i) { return fmt::format("interest {} {}", i.name, i.nonce); },
                        [](const DataEvent& d) { return fmt::format("data {} {}", d.name, d.bytes); },
                        [](const RttEvent& r) { return fmt::format("rtt {} {:.3f}", r.name, r.ms); },
                        [](const ProbeEvent& p) {
                          return p.ms ? fmt::format("probe {} {:.3f}", p.link, *p.ms)
                                      : fmt::format("probe {} loss", p.link);
                        },
                    },
                    e);
}

std::optional<Event> parse_event(std::string_view msg) {
  const auto f = split(msg);
  if (f.size() != 3) return std::nullopt;
  if (f[0] == "interest" && valid_name(f[1])) {
    if (auto n = parse_uint<std::uint32_t>(f[2])) return InterestEvent{std::string(f[1]), *n};
  } else if (f[0] == "data" && valid_name(f[1])) {
    if (auto n = parse_uint<std::uint64_t>(f[2])) return DataEvent{std::string(f[1]), *n};
  } else if (f[0] == "rtt" && valid_name(f[1])) {
    if (auto ms = parse_ms(f[2])) return RttEvent{std::string(f[1]), *ms};
  } else if (f[0] == "probe" && !f[1].empty()) {
    if (f[2] == "loss") return ProbeEvent{std::string(f[1]), std::nullopt};
    if (auto ms = parse_ms(f[2])) return ProbeEvent{std::string(f[1]), *ms};
  }
  return std::nullopt;
}

}  // namespace ndntb::logrepo
