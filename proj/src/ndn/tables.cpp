#include "ndntb/ndn/tables.hpp"

#include <algorithm>

namespace ndntb::ndn {

namespace {

// Calls f(component) for each component of a canonical uri ("/a/b" -> a, b).
template <class F>
void for_each_component(std::string_view uri, F&& f) {
  std::size_t pos = 1;
  while (pos <= uri.size() && !uri.empty()) {
    const std::size_t next = std::min(uri.find('/', pos), uri.size());
    if (!f(uri.substr(pos, next - pos))) return;
    pos = next + 1;
  }
}

}  // namespace

void Fib::insert(const Name& prefix, FaceId face, double cost) {
  Node* node = &root_;
  for_each_component(prefix.uri(), [&](std::string_view c) {
    if (!node->children) node->children = std::make_unique<Children>();
    auto it = node->children->find(c);
    if (it == node->children->end()) it = node->children->try_emplace(std::string(c)).first;
    node = &it->second;
    return true;
  });
  if (!node->entry) {
    node->entry.emplace(FibEntry{prefix, {}});
    ++size_;
  }
  auto& hops = node->entry->next_hops;
  auto hop = std::find_if(hops.begin(), hops.end(), [&](const NextHop& h) { return h.face == face; });
  if (hop != hops.end()) {
    hop->cost = cost;
  } else {
    hops.push_back(NextHop{face, cost});
  }
}

void Fib::remove(const Name& prefix, FaceId face) {
  std::vector<std::pair<Node*, std::string_view>> path;  // parent, child key
  Node* node = &root_;
  bool found = true;
  for_each_component(prefix.uri(), [&](std::string_view c) {
    auto it = node->children ? node->children->find(c) : Children::iterator{};
    if (!node->children || it == node->children->end()) return found = false;
    path.emplace_back(node, it->first);
    node = &it->second;
    return true;
  });
  if (!found || !node->entry) return;
  std::erase_if(node->entry->next_hops, [&](const NextHop& h) { return h.face == face; });
  if (!node->entry->next_hops.empty()) return;
  node->entry.reset();
  --size_;
  // Prune branches left with neither entries nor children.
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    Children& siblings = *it->first->children;
    auto child = siblings.find(it->second);
    if (child->second.entry || (child->second.children && !child->second.children->empty())) break;
    siblings.erase(child);
  }
}

const Fib::Node* Fib::child(const Node& node, std::string_view component) {
  if (!node.children) return nullptr;
  auto it = node.children->find(component);
  return it == node.children->end() ? nullptr : &it->second;
}

const Fib::Node* Fib::find_node(const Name& prefix) const {
  const Node* node = &root_;
  for_each_component(prefix.uri(), [&](std::string_view c) {
    node = child(*node, c);
    return node != nullptr;
  });
  return node;
}

const FibEntry* Fib::longest_prefix_match(const Name& name) const {
  const FibEntry* best = nullptr;
  const Node* node = &root_;
  for_each_component(name.uri(), [&](std::string_view c) {
    node = child(*node, c);
    if (node == nullptr) return false;
    if (node->entry) best = &*node->entry;
    return true;
  });
  return best;
}

const FibEntry* Fib::find_exact(const Name& prefix) const {
  const Node* node = find_node(prefix);
  return node && node->entry ? &*node->entry : nullptr;
}

const FibEntry* fib_lpm(const Fib& fib, const Name& name) { return fib.longest_prefix_match(name); }

bool PitEntry::has_nonce(std::uint32_t nonce) const {
  return std::find(nonces.begin(), nonces.end(), nonce) != nonces.end();
}

bool PitEntry::has_in_face(FaceId face) const {
  return std::find(in_faces.begin(), in_faces.end(), face) != in_faces.end();
}

PitEntry* Pit::find(const Name& name) {
  auto it = entries_.find(name.uri());
  return it == entries_.end() ? nullptr : &it->second;
}

const PitEntry* Pit::find(const Name& name) const {
  auto it = entries_.find(name.uri());
  return it == entries_.end() ? nullptr : &it->second;
}

PitEntry& Pit::insert(PitEntry entry) {
  std::string key = entry.name.uri();
  auto [it, fresh] = entries_.insert_or_assign(std::move(key), std::move(entry));
  return it->second;
}

void Pit::erase(const Name& name) { entries_.erase(name.uri()); }

std::size_t Pit::sweep(TimeUs now) {
  return std::erase_if(entries_, [now](const auto& kv) { return kv.second.expiry <= now; });
}

std::vector<const PitEntry*> Pit::entries() const {
  std::vector<const PitEntry*> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(&v);
  std::sort(out.begin(), out.end(), [](const PitEntry* a, const PitEntry* b) { return a->name < b->name; });
  return out;
}

const CsEntry* ContentStore::lookup(const Name& name, TimeUs now) {
  auto it = index_.find(name.uri());
  if (it == index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  it->second->last_used = now;
  return &*it->second;
}

void ContentStore::insert(const Data& data, TimeUs now) {
  if (capacity_ == 0) return;
  if (auto it = index_.find(data.name.uri()); it != index_.end()) {
    it->second->data = data;
    it->second->last_used = now;
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  if (lru_.size() >= capacity_) {
    index_.erase(lru_.back().name.uri());
    lru_.pop_back();
  }
  lru_.push_front(CsEntry{data.name, data, now, now});
  index_.emplace(data.name.uri(), lru_.begin());
}

std::vector<Name> ContentStore::names_by_recency() const {
  std::vector<Name> out;
  out.reserve(lru_.size());
  for (const auto& e : lru_) out.push_back(e.name);
  return out;
}

}  // namespace ndntb::ndn
