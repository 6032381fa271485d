#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndntb::ndn {

class NameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hierarchical NDN name held in canonical text form "/c1/c2/...".
/// At least one component; components are non-empty and contain no '/'.
class Name {
 public:
  /// Throws NameError on "", "/", "a/b", "/a//b", or a trailing '/'.
  static Name parse(std::string_view uri);
  static Name from_components(const std::vector<std::string>& components);

  const std::string& uri() const noexcept { return uri_; }
  std::size_t size() const;
  std::vector<std::string> components() const;

  /// Name made of the first `n` components, 1 <= n <= size().
  Name prefix(std::size_t n) const;
  Name append(std::string_view component) const;

  /// Component-wise prefix test ("/a/b" is a prefix of "/a/b/c", not of "/a/bc").
  bool is_prefix_of(const Name& other) const;

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name& a, const Name& b) { return a.uri_ <=> b.uri_; }

 private:
  explicit Name(std::string uri) : uri_(std::move(uri)) {}
  std::string uri_;
};

}  // namespace ndntb::ndn

template <>
struct std::hash<ndntb::ndn::Name> {
  std::size_t operator()(const ndntb::ndn::Name& n) const noexcept { return std::hash<std::string>{}(n.uri()); }
};
