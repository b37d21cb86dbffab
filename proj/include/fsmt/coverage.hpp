#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace fsmt {

/// Edges that lie on at least one walk from a test start to a test end with
/// length in range.
///
/// Decision rule: reach_from_start[k][v] holds when some walk of exactly k
/// edges leads from a test start to v; reach_to_end[k][v] when some walk of
/// exactly k edges leads from v to a test end (k in 0..max_length). Edge
/// (s, f) is coverable iff there are a, b with reach_from_start[a][s],
/// reach_to_end[b][f] and min_length <= a + 1 + b <= max_length. Exact
/// lengths rather than shortest distances matter because min_length may
/// force a detour around a cycle.
inline EdgeSet coverable_edges(const SutModel& m, const CoverageSpec& spec) {
  const std::size_t n = m.vertex_count();
  const std::size_t max_len = spec.max_length;
  using Layer = std::vector<char>;
  std::vector<Layer> from_start(max_len + 1, Layer(n, 0));
  std::vector<Layer> to_end(max_len + 1, Layer(n, 0));
  for (VertexIndex v : m.test_starts()) from_start[0][v] = 1;
  for (VertexIndex v : m.test_ends()) to_end[0][v] = 1;
  for (std::size_t k = 1; k <= max_len; ++k) {
    for (const auto& e : m.edges()) {
      if (from_start[k - 1][e.source]) from_start[k][e.target] = 1;
      if (to_end[k - 1][e.target]) to_end[k][e.source] = 1;
    }
  }

  EdgeSet result(m.edge_count());
  for (EdgeIndex idx = 0; idx < m.edge_count(); ++idx) {
    const Edge& e = m.edge(idx);
    bool found = false;
    for (std::size_t a = 0; a + 1 <= max_len && !found; ++a) {
      if (!from_start[a][e.source]) continue;
      for (std::size_t b = 0; a + 1 + b <= max_len; ++b) {
        if (a + 1 + b >= spec.min_length && to_end[b][e.target]) {
          found = true;
          break;
        }
      }
    }
    if (found) result.insert(idx);
  }
  return result;
}

enum class ViolationKind {
  MalformedPath,       // empty or not a walk
  PathOutOfRange,
  BadStart,
  BadEnd,
  StartVertexUnserved,
  EdgeUncovered,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::MalformedPath: return "malformed-path";
    case ViolationKind::PathOutOfRange: return "path-out-of-range";
    case ViolationKind::BadStart: return "bad-start";
    case ViolationKind::BadEnd: return "bad-end";
    case ViolationKind::StartVertexUnserved: return "start-vertex-unserved";
    case ViolationKind::EdgeUncovered: return "edge-uncovered";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> path_index;
  std::optional<VertexIndex> vertex;
  std::optional<EdgeIndex> edge;

  bool operator==(const Violation&) const = default;
};

struct CoverageVerdict {
  bool satisfied = true;
  std::vector<Violation> violations;

  void add(Violation v) {
    satisfied = false;
    violations.push_back(v);
  }

  bool has(ViolationKind k) const {
    for (const auto& v : violations) {
      if (v.kind == k) return true;
    }
    return false;
  }
};

// Reports every violation rather than stopping at the first.
inline CoverageVerdict check_level1(std::span<const TestPath> paths, const SutModel& m, const CoverageSpec& spec) {
  // Model validation guarantees v_s ∈ V_ts and V_e ⊆ V_te, so the level-2
  // endpoint sets reduce to the test start/end sets.
  assert(m.is_test_start(m.machine_start()));

  CoverageVerdict verdict;
  std::vector<bool> served(m.vertex_count(), false);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const TestPath& p = paths[i];
    if (p.empty() || !p.is_chained(m)) {
      verdict.add({ViolationKind::MalformedPath, i, std::nullopt, std::nullopt});
      continue;
    }
    if (!spec.in_range(p.length())) verdict.add({ViolationKind::PathOutOfRange, i, std::nullopt, std::nullopt});
    const VertexIndex first = p.first_vertex(m);
    const VertexIndex last = p.last_vertex(m);
    if (!m.is_test_start(first)) verdict.add({ViolationKind::BadStart, i, first, std::nullopt});
    if (!m.is_test_end(last)) verdict.add({ViolationKind::BadEnd, i, last, std::nullopt});
    served[first] = true;
  }
  for (VertexIndex v : m.test_starts()) {
    if (!served[v]) verdict.add({ViolationKind::StartVertexUnserved, std::nullopt, v, std::nullopt});
  }
  return verdict;
}

inline CoverageVerdict check_level2(std::span<const TestPath> paths, const SutModel& m, const CoverageSpec& spec) {
  CoverageVerdict verdict = check_level1(paths, m, spec);
  const EdgeSet used = edge_union(paths, m.edge_count());
  for (EdgeIndex e : coverable_edges(m, spec).to_vector()) {
    if (!used.contains(e)) verdict.add({ViolationKind::EdgeUncovered, std::nullopt, std::nullopt, e});
  }
  return verdict;
}

inline CoverageVerdict check_coverage(std::span<const TestPath> paths, const SutModel& m, const CoverageSpec& spec) {
  return spec.level == CoverageLevel::Level1 ? check_level1(paths, m, spec) : check_level2(paths, m, spec);
}

inline nlohmann::json verdict_to_json(const SutModel& m, const CoverageVerdict& verdict) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : verdict.violations) {
    nlohmann::json j{{"kind", to_string(v.kind)}};
    if (v.path_index) j["path"] = *v.path_index;
    if (v.vertex) j["vertex"] = m.vertex_name(*v.vertex);
    if (v.edge) j["edge"] = m.edge(*v.edge).id;
    violations.push_back(std::move(j));
  }
  return {{"satisfied", verdict.satisfied}, {"violations", std::move(violations)}};
}

}  // namespace fsmt
