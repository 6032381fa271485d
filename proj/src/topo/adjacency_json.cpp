#include <nlohmann/json.hpp>

#include "ndntb/topo/topology.hpp"

#include <fmt/format.h>

namespace ndntb::topo {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw TopologyError(TopoErrc::malformed, what); }

Medium parse_medium(const json& v, std::size_t i, std::size_t j) {
  if (v.is_null() || v == "wired") return Medium::wired;
  if (v == "wireless") return Medium::wireless;
  malformed(fmt::format("media[{}][{}] must be \"wired\" or \"wireless\"", i, j));
}

}  // namespace

Topology parse_adjacency(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(fmt::format("adjacency document is not valid JSON: {}", e.what()));
  }

  // A bare matrix is accepted as shorthand for {"matrix": ...}.
  if (doc.is_array()) doc = json{{"matrix", doc}};
  if (!doc.is_object()) malformed("adjacency document must be a JSON object");
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) malformed("adjacency document needs a \"matrix\" array");

  const json& m = doc["matrix"];
  const std::size_t n = m.size();
  if (n == 0) malformed("matrix is empty");

  std::vector<std::string> labels(n);
  if (doc.contains("labels")) {
    const json& l = doc["labels"];
    if (!l.is_array() || l.size() != n) malformed("\"labels\" must be an array with one entry per matrix row");
    for (std::size_t i = 0; i < n; ++i) {
      if (l[i].is_null()) continue;
      if (!l[i].is_string()) malformed(fmt::format("labels[{}] must be a string", i));
      labels[i] = l[i].get<std::string>();
    }
  }

  const json* media = nullptr;
  if (doc.contains("media") && !doc["media"].is_null()) {
    media = &doc["media"];
    if (!media->is_array() || media->size() != n) malformed("\"media\" must match the matrix shape");
  }

  std::vector<std::optional<LinkSpec>> matrix(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = m[i];
    if (!row.is_array() || row.size() != n) malformed(fmt::format("matrix row {} must have {} entries", i, n));
    if (media && (!(*media)[i].is_array() || (*media)[i].size() != n)) {
      malformed(fmt::format("media row {} must have {} entries", i, n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const json& v = row[j];
      if (v.is_null()) continue;
      if (!v.is_number()) malformed(fmt::format("matrix[{}][{}] must be a number or null", i, j));
      const double delay = v.get<double>();
      if (i == j) {
        if (delay != 0.0) malformed(fmt::format("matrix[{}][{}] is a self-loop", i, j));
        continue;
      }
      if (!(delay > 0.0)) {
        throw TopologyError(TopoErrc::non_positive_delay,
                            fmt::format("matrix[{}][{}] delay {} is not positive", i, j, delay));
      }
      LinkSpec spec;
      spec.delay_ms = delay;
      if (media) spec.medium = parse_medium((*media)[i][j], i, j);
      matrix[i * n + j] = spec;
    }
  }
  return Topology::build(std::move(labels), std::move(matrix));
}

std::string serialize_adjacency(const Topology& topo) {
  const std::size_t n = topo.node_count();
  json labels = json::array();
  json matrix = json::array();
  json media = json::array();
  bool any_wireless = false;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(topo.node(i).label);
    json row = json::array();
    json mrow = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      const auto& l = topo.link(i, j);
      if (l) {
        row.push_back(l->delay_ms);
        mrow.push_back(std::string(to_string(l->medium)));
        any_wireless = any_wireless || l->medium == Medium::wireless;
      } else {
        row.push_back(nullptr);
        mrow.push_back(nullptr);
      }
    }
    matrix.push_back(std::move(row));
    media.push_back(std::move(mrow));
  }
  json doc{{"labels", std::move(labels)}, {"matrix", std::move(matrix)}};
  if (any_wireless) doc["media"] = std::move(media);
  return doc.dump();
}

}  // namespace ndntb::topo
