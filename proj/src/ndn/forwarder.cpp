#include "ndntb/ndn/forwarder.hpp"

namespace ndntb::ndn {

std::string_view to_string(InterestOutcome o) {
  switch (o) {
    case InterestOutcome::cs_hit: return "cs_hit";
    case InterestOutcome::aggregated: return "aggregated";
    case InterestOutcome::duplicate: return "duplicate";
    case InterestOutcome::forwarded: return "forwarded";
    case InterestOutcome::unroutable: return "unroutable";
    case InterestOutcome::hop_limit_exhausted: return "hop_limit_exhausted";
    case InterestOutcome::no_eligible_face: return "no_eligible_face";
  }
  return "unknown";
}

Forwarder::Forwarder(topo::NodeId node, ForwarderConfig config)
    : node_(std::move(node)), config_(config), cs_(config.cs_capacity) {}

FaceId Forwarder::add_face(std::string remote, FaceKind kind) {
  const FaceId id{static_cast<std::uint32_t>(faces_.size())};
  faces_.push_back(Face{id, std::move(remote), kind});
  face_counters_.emplace_back();
  return id;
}

InterestResult Forwarder::on_interest(const Interest& interest, FaceId in_face, TimeUs now) {
  InterestResult result;
  ++face_counters_.at(in_face.value).interest_in;

  if (const CsEntry* hit = cs_.lookup(interest.name, now)) {
    ++counters_.cs_hits;
    ++face_counters_[in_face.value].data_out;
    result.outcome = InterestOutcome::cs_hit;
    result.data.emplace_back(in_face, hit->data);
    return result;
  }

  if (PitEntry* entry = pit_.find(interest.name)) {
    if (entry->expiry <= now) {
      pit_.erase(interest.name);
      ++counters_.pit_timeouts;
    } else if (entry->has_nonce(interest.nonce)) {
      ++counters_.duplicate_nonce;
      result.outcome = InterestOutcome::duplicate;
      return result;
    } else {
      entry->nonces.push_back(interest.nonce);
      if (!entry->has_in_face(in_face)) entry->in_faces.push_back(in_face);
      ++counters_.aggregated;
      result.outcome = InterestOutcome::aggregated;
      return result;
    }
  }

  if (interest.hop_limit <= 1) {
    ++counters_.hop_limit_exhausted;
    result.outcome = InterestOutcome::hop_limit_exhausted;
    return result;
  }

  const FibEntry* fib_entry = fib_.longest_prefix_match(interest.name);
  if (fib_entry == nullptr) {
    ++counters_.unroutable;
    result.outcome = InterestOutcome::unroutable;
    return result;
  }

  const std::vector<FaceId> out = strategy_select(config_.strategy, *fib_entry, in_face);
  if (out.empty()) {
    ++counters_.no_eligible_face;
    result.outcome = InterestOutcome::no_eligible_face;
    return result;
  }

  PitEntry entry{interest.name, {in_face}, out, {interest.nonce}, now + config_.pit_lifetime};
  pit_.insert(std::move(entry));

  Interest forwarded = interest;
  forwarded.hop_limit = static_cast<std::uint8_t>(interest.hop_limit - 1);
  for (FaceId f : out) {
    ++face_counters_.at(f.value).interest_out;
    result.interests.emplace_back(f, forwarded);
  }
  result.outcome = InterestOutcome::forwarded;
  return result;
}

DataResult Forwarder::on_data(const Data& data, FaceId in_face, TimeUs now) {
  DataResult result;
  ++face_counters_.at(in_face.value).data_in;

  PitEntry* entry = pit_.find(data.name);
  if (entry != nullptr && entry->expiry <= now) {
    pit_.erase(data.name);
    ++counters_.pit_timeouts;
    entry = nullptr;
  }
  if (entry == nullptr) {
    ++counters_.unsolicited_data;
    return result;
  }

  result.solicited = true;
  for (FaceId f : entry->in_faces) {
    ++face_counters_.at(f.value).data_out;
    result.data.emplace_back(f, data);
  }
  pit_.erase(data.name);
  cs_.insert(data, now);
  return result;
}

std::size_t Forwarder::pit_sweep(TimeUs now) {
  const std::size_t removed = pit_.sweep(now);
  counters_.pit_timeouts += removed;
  return removed;
}

}  // namespace ndntb::ndn
