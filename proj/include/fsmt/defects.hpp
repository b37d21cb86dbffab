#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsmt/error.hpp"
#include "fsmt/metrics.hpp"
#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace fsmt {

struct DefectPair {
  EdgeIndex trigger = 0;   // corrupts state
  EdgeIndex manifest = 0;  // exposes the corruption

  bool operator==(const DefectPair&) const = default;
};

struct DefectSpec {
  std::vector<EdgeIndex> singles;
  std::vector<DefectPair> pairs;
  Ratio mean_pair_distance{0};

  bool operator==(const DefectSpec&) const = default;
};

struct ActivationReport {
  std::size_t singles_activated = 0;
  std::size_t pairs_activated = 0;
  Ratio efficiency_single{0};
  Ratio efficiency_pair{0};

  bool operator==(const ActivationReport&) const = default;
};

// Mean per-instance defect counts across all instances and their mean edge
// count; used to scale default densities by model size.
inline constexpr double kMeanSingleDefects = 8.0;
inline constexpr double kMeanPairDefects = 7.1;
inline constexpr double kMeanEdgeCount = 35.8;

struct DefectCounts {
  std::size_t singles = 0;
  std::size_t pairs = 0;
};

inline DefectCounts default_defect_counts(const SutModel& m) {
  const double scale = static_cast<double>(m.edge_count()) / kMeanEdgeCount;
  auto scaled = [&](double mean) {
    return static_cast<std::size_t>(std::max(1.0, std::round(mean * scale)));
  };
  return {scaled(kMeanSingleDefects), scaled(kMeanPairDefects)};
}

/// Shortest walk lengths (in edges) from `from` to every vertex; nullopt if
/// unreachable.
inline std::vector<std::optional<std::size_t>> walk_distances(const SutModel& m, VertexIndex from) {
  std::vector<std::optional<std::size_t>> dist(m.vertex_count());
  std::deque<VertexIndex> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const VertexIndex v = queue.front();
    queue.pop_front();
    for (EdgeIndex e : m.out_edges(v)) {
      const VertexIndex w = m.target(e);
      if (!dist[w]) {
        dist[w] = *dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

/// Number of edges walked strictly between trigger and manifest on the
/// shortest connection (0 when the manifest directly follows the trigger),
/// or nullopt if the manifest cannot follow the trigger.
inline std::optional<std::size_t> pair_distance(const SutModel& m, EdgeIndex trigger, EdgeIndex manifest) {
  return walk_distances(m, m.target(trigger))[m.source(manifest)];
}

struct InjectOptions {
  bool allow_self_pairs = false;
};

/// Uniform seeded placement of distinct SINGLE edges and distinct ordered
/// PAIR edges where the manifest is reachable after the trigger.
inline DefectSpec inject_defects(const SutModel& m, std::size_t single_count, std::size_t pair_count,
                                 std::uint64_t seed, const InjectOptions& options = {}) {
  if (single_count > m.edge_count()) {
    throw UnsatisfiableError("requested " + std::to_string(single_count) + " SINGLE defects but the model has " +
                             std::to_string(m.edge_count()) + " edges");
  }
  std::vector<std::pair<DefectPair, std::size_t>> candidates;
  for (EdgeIndex t = 0; t < m.edge_count(); ++t) {
    const auto dist = walk_distances(m, m.target(t));
    for (EdgeIndex a = 0; a < m.edge_count(); ++a) {
      if (a == t && !options.allow_self_pairs) continue;
      if (const auto d = dist[m.source(a)]) candidates.push_back({{t, a}, *d});
    }
  }
  if (pair_count > candidates.size()) {
    throw UnsatisfiableError("requested " + std::to_string(pair_count) + " PAIR defects but only " +
                             std::to_string(candidates.size()) + " valid pairs exist");
  }

  std::mt19937_64 rng(seed);
  DefectSpec spec;
  std::vector<EdgeIndex> edges(m.edge_count());
  for (EdgeIndex e = 0; e < edges.size(); ++e) edges[e] = e;
  std::shuffle(edges.begin(), edges.end(), rng);
  spec.singles.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(single_count));
  std::sort(spec.singles.begin(), spec.singles.end());

  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(pair_count);
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::pair(a.first.trigger, a.first.manifest) < std::pair(b.first.trigger, b.first.manifest);
  });
  std::int64_t total_distance = 0;
  for (const auto& [pair, d] : candidates) {
    spec.pairs.push_back(pair);
    total_distance += static_cast<std::int64_t>(d);
  }
  if (!spec.pairs.empty()) {
    spec.mean_pair_distance = Ratio(total_distance, static_cast<std::int64_t>(spec.pairs.size()));
  }
  return spec;
}

inline DefectSpec inject_default_defects(const SutModel& m, std::uint64_t seed) {
  const auto counts = default_defect_counts(m);
  // Small models may not support the scaled density; place as many as exist.
  std::size_t valid_pairs = 0;
  for (EdgeIndex t = 0; t < m.edge_count(); ++t) {
    const auto dist = walk_distances(m, m.target(t));
    for (EdgeIndex a = 0; a < m.edge_count(); ++a) {
      if (a != t && dist[m.source(a)]) ++valid_pairs;
    }
  }
  return inject_defects(m, std::min(counts.singles, m.edge_count()), std::min(counts.pairs, valid_pairs), seed);
}

// True when some index i < j has path[i] == trigger and path[j] == manifest.
inline bool activates_pair(const TestPath& p, const DefectPair& pair) {
  bool triggered = false;
  for (EdgeIndex e : p.edges) {
    if (triggered && e == pair.manifest) return true;
    if (e == pair.trigger) triggered = true;
  }
  return false;
}

/// Pair defects are only activated within a single path: the SUT is reset
/// between test paths.
inline ActivationReport activated_defects(std::span<const TestPath> paths, const DefectSpec& defects,
                                          const MetricsReport& metrics) {
  ActivationReport r;
  for (EdgeIndex e : defects.singles) {
    for (const auto& p : paths) {
      if (p.contains(e)) {
        ++r.singles_activated;
        break;
      }
    }
  }
  for (const auto& pair : defects.pairs) {
    for (const auto& p : paths) {
      if (activates_pair(p, pair)) {
        ++r.pairs_activated;
        break;
      }
    }
  }
  if (metrics.total_steps > 0) {
    const auto len = static_cast<std::int64_t>(metrics.total_steps);
    r.efficiency_single = Ratio(static_cast<std::int64_t>(r.singles_activated), len);
    r.efficiency_pair = Ratio(static_cast<std::int64_t>(r.pairs_activated), len);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Defect file (JSON): {"singles": [edge ids], "pairs": [[trigger, manifest]]}
// ---------------------------------------------------------------------------

inline nlohmann::json defects_to_json(const SutModel& m, const DefectSpec& d) {
  nlohmann::json singles = nlohmann::json::array();
  for (EdgeIndex e : d.singles) singles.push_back(m.edge(e).id);
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : d.pairs) pairs.push_back({m.edge(p.trigger).id, m.edge(p.manifest).id});
  return {{"model", m.name()},
          {"singles", std::move(singles)},
          {"pairs", std::move(pairs)},
          {"mean_pair_distance", to_decimal(d.mean_pair_distance, 3)}};
}

inline DefectSpec defects_from_json(const SutModel& m, const nlohmann::json& j) {
  try {
    auto edge = [&](const nlohmann::json& id) {
      const auto s = id.get<std::string>();
      auto e = m.find_edge(s);
      if (!e) throw ModelError("defect file references unknown edge '" + s + "'");
      return *e;
    };
    DefectSpec d;
    for (const auto& s : j.at("singles")) d.singles.push_back(edge(s));
    std::int64_t total = 0;
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw ModelError("defect pair must be [trigger, manifest]");
      DefectPair pair{edge(p[0]), edge(p[1])};
      const auto dist = pair_distance(m, pair.trigger, pair.manifest);
      if (!dist) {
        throw ModelError("manifest edge " + m.edge(pair.manifest).id + " is unreachable after trigger " +
                         m.edge(pair.trigger).id);
      }
      total += static_cast<std::int64_t>(*dist);
      d.pairs.push_back(pair);
    }
    if (!d.pairs.empty()) d.mean_pair_distance = Ratio(total, static_cast<std::int64_t>(d.pairs.size()));
    return d;
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("malformed defect file: ") + ex.what());
  }
}

inline nlohmann::json activation_to_json(const ActivationReport& r) {
  return {{"A_S", r.singles_activated},
          {"A_P", r.pairs_activated},
          {"E_S", to_decimal(r.efficiency_single, 3)},
          {"E_P", to_decimal(r.efficiency_pair, 3)}};
}

}  // namespace fsmt
