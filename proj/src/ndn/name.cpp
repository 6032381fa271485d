#include "ndntb/ndn/name.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace ndntb::ndn {

Name Name::parse(std::string_view uri) {
  if (uri.size() < 2 || uri.front() != '/' || uri.back() == '/') {
    throw NameError(fmt::format("invalid name '{}'", uri));
  }
  for (std::size_t i = 1; i < uri.size(); ++i) {
    if (uri[i] == '/' && uri[i - 1] == '/') throw NameError(fmt::format("empty component in '{}'", uri));
  }
  return Name(std::string(uri));
}

Name Name::from_components(const std::vector<std::string>& components) {
  if (components.empty()) throw NameError("name needs at least one component");
  std::string uri;
  for (const auto& c : components) {
    if (c.empty() || c.find('/') != std::string::npos) throw NameError(fmt::format("invalid component '{}'", c));
    uri += '/';
    uri += c;
  }
  return Name(std::move(uri));
}

std::size_t Name::size() const { return static_cast<std::size_t>(std::count(uri_.begin(), uri_.end(), '/')); }

std::vector<std::string> Name::components() const {
  std::vector<std::string> out;
  std::size_t start = 1;
  while (start <= uri_.size()) {
    const std::size_t end = std::min(uri_.find('/', start), uri_.size());
    out.emplace_back(uri_.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

Name Name::prefix(std::size_t n) const {
  if (n == 0) throw NameError("prefix length must be at least 1");
  std::size_t seen = 0;
  for (std::size_t i = 1; i < uri_.size(); ++i) {
    if (uri_[i] == '/' && ++seen == n) return Name(uri_.substr(0, i));
  }
  if (seen + 1 == n) return *this;
  throw NameError(fmt::format("'{}' has fewer than {} components", uri_, n));
}

Name Name::append(std::string_view component) const {
  if (component.empty() || component.find('/') != std::string_view::npos) {
    throw NameError(fmt::format("invalid component '{}'", component));
  }
  std::string uri = uri_;
  uri += '/';
  uri += component;
  return Name(std::move(uri));
}

bool Name::is_prefix_of(const Name& other) const {
  const std::string& o = other.uri_;
  if (o.size() < uri_.size() || o.compare(0, uri_.size(), uri_) != 0) return false;
  return o.size() == uri_.size() || o[uri_.size()] == '/';
}

}  // namespace ndntb::ndn
