#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsmt/error.hpp"
#include "fsmt/model.hpp"
#include "fsmt/stats.hpp"

namespace fsmt {

// Requested instance properties. All counts are matched exactly.
struct TargetProperties {
  std::size_t vertex_count = 2;
  std::size_t edge_count = 1;
  std::size_t cycle_count = 0;
  std::size_t test_start_count = 1;
  std::size_t test_end_count = 1;
  std::size_t start_end_overlap_count = 0;
  std::size_t machine_end_count = 1;

  bool operator==(const TargetProperties&) const = default;

  void validate() const {
    if (vertex_count < 2) throw UnsatisfiableError("need at least 2 vertices");
    if (edge_count + 1 < vertex_count) {
      throw UnsatisfiableError("need at least |V|-1 edges to reach every vertex from the machine start");
    }
    if (test_start_count < 1) throw UnsatisfiableError("the machine start is always a test start");
    if (start_end_overlap_count > std::min(test_start_count, test_end_count)) {
      throw UnsatisfiableError("start/end overlap exceeds the smaller of the two sets");
    }
    if (machine_end_count > test_end_count) {
      throw UnsatisfiableError("machine ends must be a subset of test ends");
    }
    if (test_start_count + test_end_count - start_end_overlap_count > vertex_count) {
      throw UnsatisfiableError("test start and end sets do not fit in the vertex set");
    }
  }
};

inline nlohmann::json targets_to_json(const TargetProperties& t) {
  return {{"vertices", t.vertex_count},       {"edges", t.edge_count},
          {"cycles", t.cycle_count},          {"test_starts", t.test_start_count},
          {"test_ends", t.test_end_count},    {"overlap", t.start_end_overlap_count},
          {"machine_ends", t.machine_end_count}};
}

inline TargetProperties targets_from_json(const nlohmann::json& j) {
  TargetProperties t;
  t.vertex_count = j.at("vertices").get<std::size_t>();
  t.edge_count = j.at("edges").get<std::size_t>();
  t.cycle_count = j.at("cycles").get<std::size_t>();
  t.test_start_count = j.at("test_starts").get<std::size_t>();
  t.test_end_count = j.at("test_ends").get<std::size_t>();
  t.start_end_overlap_count = j.at("overlap").get<std::size_t>();
  t.machine_end_count = j.at("machine_ends").get<std::size_t>();
  return t;
}

struct ModelGenOptions {
  std::size_t max_attempts = 1000;
  std::string name = "generated";
};

namespace detail {

// Directed edge list over vertex indices, without parallels or self-loops.
struct DraftGraph {
  std::size_t n = 0;
  std::vector<std::pair<VertexIndex, VertexIndex>> edges;
  std::vector<std::vector<char>> adjacent;

  explicit DraftGraph(std::size_t vertices) : n(vertices), adjacent(vertices, std::vector<char>(vertices, 0)) {}

  bool has(VertexIndex u, VertexIndex v) const { return adjacent[u][v] != 0; }
  void add(VertexIndex u, VertexIndex v) {
    edges.emplace_back(u, v);
    adjacent[u][v] = 1;
  }
};

// Number of u->v paths using only edges with u < v, saturated at 2.
inline std::vector<std::vector<std::uint8_t>> forward_path_counts(const DraftGraph& g) {
  std::vector<std::vector<std::uint8_t>> paths(g.n, std::vector<std::uint8_t>(g.n, 0));
  for (VertexIndex s = 0; s < g.n; ++s) {
    paths[s][s] = 1;
    for (VertexIndex u = s; u < g.n; ++u) {
      if (!paths[s][u]) continue;
      for (VertexIndex v = u + 1; v < g.n; ++v) {
        if (g.has(u, v)) paths[s][v] = static_cast<std::uint8_t>(std::min(2, paths[s][v] + paths[s][u]));
      }
    }
  }
  return paths;
}

// Category sizes for the start/end/machine-end assignment.
struct EndpointPlan {
  std::size_t start_only = 0;
  std::size_t end_only = 0;           // test end, not machine end, not start
  std::size_t machine_end_only = 0;   // machine end (hence test end), not start
  std::size_t start_end = 0;          // start and test end, not machine end
  std::size_t start_machine_end = 0;  // start and machine end
  int root_category = 0;              // 0 start_only, 1 start_end, 2 start_machine_end
};

inline std::vector<EndpointPlan> endpoint_plans(const TargetProperties& t) {
  std::vector<EndpointPlan> plans;
  const std::size_t k = t.start_end_overlap_count;
  for (std::size_t both_machine = 0; both_machine <= std::min(k, t.machine_end_count); ++both_machine) {
    EndpointPlan p;
    p.start_machine_end = both_machine;
    p.start_end = k - both_machine;
    if (t.test_start_count < k) continue;
    p.start_only = t.test_start_count - k;
    p.machine_end_only = t.machine_end_count - both_machine;
    if (t.test_end_count < k + p.machine_end_only) continue;
    p.end_only = t.test_end_count - k - p.machine_end_only;
    const std::size_t used = p.start_only + p.end_only + p.machine_end_only + p.start_end + p.start_machine_end;
    if (used > t.vertex_count) continue;
    const std::array<std::size_t, 3> root_options{p.start_only, p.start_end, p.start_machine_end};
    for (int c = 0; c < 3; ++c) {
      if (root_options[static_cast<std::size_t>(c)] == 0) continue;
      p.root_category = c;
      plans.push_back(p);
    }
  }
  return plans;
}

}  // namespace detail

/// Generates a model whose vertex, edge, simple-cycle and endpoint-set counts
/// equal the targets.
///
/// Construction: a random arborescence rooted at the machine start (vertex
/// s0) makes every vertex reachable; extra edges go forward in vertex order,
/// so they close no cycle; then one back edge per requested cycle is added
/// between vertices joined by exactly one forward path. Back edges can still
/// combine into additional cycles, so the cycle count is verified and the
/// attempt repeated on mismatch.
inline SutModel generate_instance(const TargetProperties& t, std::uint64_t seed, const ModelGenOptions& options = {}) {
  t.validate();
  const std::size_t n = t.vertex_count;
  if (t.edge_count - (n - 1) < t.cycle_count) {
    throw UnsatisfiableError("each cycle needs an edge beyond the " + std::to_string(n - 1) +
                             " spanning edges; requested " + std::to_string(t.cycle_count) + " cycles with " +
                             std::to_string(t.edge_count) + " edges");
  }
  if (t.edge_count > n * (n - 1)) throw UnsatisfiableError("too many edges for a graph without parallels");
  const auto plans = detail::endpoint_plans(t);
  if (plans.empty()) throw UnsatisfiableError("start/end/machine-end counts cannot be realised together");

  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
  };

  std::size_t last_cycles = 0;
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    detail::DraftGraph g(n);
    for (VertexIndex v = 1; v < n; ++v) g.add(uniform(v), v);

    const std::size_t chords = t.edge_count - (n - 1) - t.cycle_count;
    std::vector<std::pair<VertexIndex, VertexIndex>> forward;
    for (VertexIndex u = 0; u < n; ++u) {
      for (VertexIndex v = u + 1; v < n; ++v) {
        if (!g.has(u, v)) forward.emplace_back(u, v);
      }
    }
    if (forward.size() < chords) throw UnsatisfiableError("too many edges for an acyclic backbone");
    std::shuffle(forward.begin(), forward.end(), rng);
    for (std::size_t i = 0; i < chords; ++i) g.add(forward[i].first, forward[i].second);

    const auto paths = detail::forward_path_counts(g);
    std::vector<std::pair<VertexIndex, VertexIndex>> back;
    for (VertexIndex v = 0; v < n; ++v) {
      for (VertexIndex u = v + 1; u < n; ++u) {
        if (paths[v][u] == 1) back.emplace_back(u, v);
      }
    }
    if (back.size() < t.cycle_count) continue;
    std::shuffle(back.begin(), back.end(), rng);
    for (std::size_t i = 0; i < t.cycle_count; ++i) g.add(back[i].first, back[i].second);

    // Endpoint sets.
    const auto& plan = plans[uniform(plans.size())];
    std::vector<VertexIndex> others;
    for (VertexIndex v = 1; v < n; ++v) others.push_back(v);
    std::shuffle(others.begin(), others.end(), rng);
    std::vector<VertexIndex> starts{0}, ends, machine_ends;
    std::array<std::size_t, 5> remaining{plan.start_only, plan.start_end, plan.start_machine_end, plan.end_only,
                                         plan.machine_end_only};
    --remaining[static_cast<std::size_t>(plan.root_category)];
    if (plan.root_category >= 1) ends.push_back(0);
    if (plan.root_category == 2) machine_ends.push_back(0);
    std::size_t next = 0;
    for (std::size_t category = 0; category < remaining.size(); ++category) {
      for (std::size_t i = 0; i < remaining[category]; ++i) {
        const VertexIndex v = others[next++];
        if (category <= 2) starts.push_back(v);
        if (category >= 1) ends.push_back(v);
        if (category == 2 || category == 4) machine_ends.push_back(v);
      }
    }

    ModelDescription desc;
    desc.name = options.name;
    auto vname = [](VertexIndex v) { return "s" + std::to_string(v); };
    for (VertexIndex v = 0; v < n; ++v) desc.vertices.push_back(vname(v));
    auto order = g.edges;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < order.size(); ++i) {
      desc.edges.push_back({"e" + std::to_string(i + 1), vname(order[i].first), vname(order[i].second),
                            "t" + std::to_string(i + 1)});
    }
    desc.machine_start = vname(0);
    for (VertexIndex v : machine_ends) desc.machine_ends.push_back(vname(v));
    for (VertexIndex v : starts) desc.test_starts.push_back(vname(v));
    for (VertexIndex v : ends) desc.test_ends.push_back(vname(v));
    SutModel model = SutModel::build(desc);

    const CycleCount cycles = count_simple_cycles(model, t.cycle_count + 1);
    last_cycles = cycles.count;
    if (cycles.count == t.cycle_count) return model;
  }
  throw UnsatisfiableError("no model with " + std::to_string(t.cycle_count) + " cycles after " +
                           std::to_string(options.max_attempts) + " attempts (last attempt had " +
                           std::to_string(last_cycles) + ")");
}

enum class InstanceProfile { Artificial, Industrial };

inline const char* to_string(InstanceProfile p) {
  return p == InstanceProfile::Artificial ? "artificial" : "industrial";
}

/// Samples targets for a profile (artificial: |V| 15-23, |E| 23-35, 2-3
/// cycles, 1-2 test starts/ends, one machine end; industrial: |V| 31-57,
/// |E| 41-95, 0-18 cycles, wider endpoint sets), then clamps to a
/// consistent combination.
inline TargetProperties sample_targets(InstanceProfile profile, std::mt19937_64& rng) {
  auto in = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  TargetProperties t;
  if (profile == InstanceProfile::Artificial) {
    // Half the draws sit at the profile medians (|V| 15, |E| 35), the rest
    // spread over the ranges, so both mean and median land on target.
    auto coin = [&] { return std::bernoulli_distribution(0.5)(rng); };
    t.vertex_count = coin() ? 15 : in(16, 23);
    t.edge_count = coin() ? 35 : in(23, 34);
    t.cycle_count = in(2, 3);
    t.edge_count = std::max(t.edge_count, t.vertex_count - 1 + t.cycle_count);
    t.test_start_count = in(1, 2);
    t.test_end_count = in(1, 2);
    t.machine_end_count = 1;
    t.start_end_overlap_count = in(0, std::min(t.test_start_count, t.test_end_count));
  } else {
    t.vertex_count = in(31, 57);
    t.edge_count = in(std::max<std::size_t>(41, t.vertex_count + 2), 95);
    t.cycle_count = in(0, std::min<std::size_t>(18, t.edge_count - (t.vertex_count - 1)));
    t.test_start_count = in(1, 17);
    t.start_end_overlap_count = in(0, std::min<std::size_t>(6, t.test_start_count));
    // Starts and ends together must fit in the vertex set.
    const std::size_t max_ends = std::min<std::size_t>(25, t.vertex_count - t.test_start_count + t.start_end_overlap_count);
    t.test_end_count = in(std::max<std::size_t>(1, t.start_end_overlap_count), max_ends);
    t.machine_end_count = in(1, std::min<std::size_t>(21, t.test_end_count));
  }
  return t;
}

}  // namespace fsmt
