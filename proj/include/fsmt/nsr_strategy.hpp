#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace fsmt {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

namespace detail {

inline void extend_walks(const SutModel& m, const CoverageSpec& spec, TestPath& walk,
                         std::vector<TestPath>& out, std::size_t cap, SearchBudget& budget) {
  budget.charge();
  if (spec.in_range(walk.length())) {
    if (out.size() == cap) {
      throw ResourceLimitError("walk enumeration cap of " + std::to_string(cap) + " exceeded");
    }
    out.push_back(walk);
  }
  if (walk.length() >= spec.max_length) return;
  for (EdgeIndex e : m.out_edges(walk.last_vertex(m))) {
    walk.edges.push_back(e);
    extend_walks(m, spec, walk, out, cap, budget);
    walk.edges.pop_back();
  }
}

}  // namespace detail

/// Every walk with length in range, each exactly once. Walks are grouped by
/// first edge (declaration order) and listed in depth-first preorder, so a
/// walk precedes its own extensions.
inline std::vector<TestPath> enumerate_paths_in_range(const SutModel& m, const CoverageSpec& spec,
                                                      SearchBudget& budget,
                                                      std::size_t cap = kDefaultEnumerationCap) {
  std::vector<TestPath> out;
  TestPath walk;
  for (EdgeIndex e = 0; e < m.edge_count(); ++e) {
    walk.edges.assign(1, e);
    detail::extend_walks(m, spec, walk, out, cap, budget);
  }
  return out;
}

inline std::vector<TestPath> enumerate_paths_in_range(const SutModel& m, const CoverageSpec& spec,
                                                      std::size_t cap = kDefaultEnumerationCap) {
  SearchBudget budget;
  return enumerate_paths_in_range(m, spec, budget, cap);
}

// Keeps walks that start at a test start and end at a test end.
inline std::vector<TestPath> filter_test_paths(std::span<const TestPath> paths, const SutModel& m) {
  std::vector<TestPath> out;
  for (const auto& p : paths) {
    if (!p.empty() && m.is_test_start(p.first_vertex(m)) && m.is_test_end(p.last_vertex(m))) {
      out.push_back(p);
    }
  }
  return out;
}

/// Single greedy pass in input order. A path is kept when its start vertex
/// is not yet served, or, for level-2 coverage, when it contains an edge no
/// kept path has.
inline std::vector<TestPath> reduce_test_paths(std::span<const TestPath> paths, const SutModel& m,
                                               CoverageLevel level) {
  std::vector<TestPath> kept;
  std::vector<bool> served(m.vertex_count(), false);
  EdgeSet covered(m.edge_count());
  for (const auto& p : paths) {
    const VertexIndex start = p.first_vertex(m);
    bool keep = !served[start];
    if (!keep && level == CoverageLevel::Level2) {
      for (EdgeIndex e : p.edges) {
        if (!covered.contains(e)) {
          keep = true;
          break;
        }
      }
    }
    if (!keep) continue;
    served[start] = true;
    for (EdgeIndex e : p.edges) covered.insert(e);
    kept.push_back(p);
  }
  return kept;
}

struct NsrOptions {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  SearchLimits limits;
};

/// N-switch set reduction: enumerate all in-range walks, keep valid test
/// paths, then reduce greedily.
inline TestPathSet generate_nsr(const SutModel& m, const CoverageSpec& spec, const NsrOptions& options = {}) {
  spec.validate();
  SearchBudget budget(options.limits);
  const auto all = enumerate_paths_in_range(m, spec, budget, options.enumeration_cap);
  const auto valid = filter_test_paths(all, m);

  TestPathSet result;
  result.paths = reduce_test_paths(valid, m, spec.level);

  std::vector<bool> served(m.vertex_count(), false);
  for (const auto& p : valid) served[p.first_vertex(m)] = true;
  for (VertexIndex v : m.test_starts()) {
    if (!served[v]) result.infeasible_starts.push_back(v);
  }
  const EdgeSet coverable = edge_union(valid, m.edge_count());
  for (EdgeIndex e = 0; e < m.edge_count(); ++e) {
    if (!coverable.contains(e)) result.uncoverable_edges.push_back(e);
  }
  finalize_status(result, m, spec.level);
  return result;
}

}  // namespace fsmt
