#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace fsmt {

/// Keeps at most one edge per (source, target) pair, in input order.
///
/// With level-2 coverage a kept edge that is already covered is swapped for a
/// later parallel edge, so searches prefer uncovered transitions. The swap is
/// applied even when the later edge is covered too.
inline std::vector<EdgeIndex> remove_parallel_edges(std::span<const EdgeIndex> candidates,
                                                    const SutModel& m, const EdgeSet& uncovered,
                                                    CoverageLevel level) {
  std::vector<EdgeIndex> filtered;
  filtered.reserve(candidates.size());
  for (EdgeIndex e : candidates) {
    auto parallel = std::find_if(filtered.begin(), filtered.end(), [&](EdgeIndex kept) {
      return m.source(kept) == m.source(e) && m.target(kept) == m.target(e);
    });
    if (parallel == filtered.end()) {
      filtered.push_back(e);
    } else if (level == CoverageLevel::Level2 && !uncovered.contains(*parallel)) {
      *parallel = e;
    }
  }
  return filtered;
}

/// Breadth-first search for a walk from `start` to any test end whose length
/// lies in the spec's range. The first walk dequeued that qualifies is
/// returned, so the result has the minimum feasible length; ties go to the
/// walk built from earlier-declared edges.
inline std::optional<TestPath> find_shortest_path_in_range(const SutModel& m, const CoverageSpec& spec,
                                                           const EdgeSet& uncovered, VertexIndex start,
                                                           SearchBudget& budget) {
  std::deque<TestPath> queue;
  TestPath next;
  VertexIndex last = start;
  do {
    if (next.length() <= spec.max_length) {
      if (next.length() >= spec.min_length && m.is_test_end(last)) return next;
      if (next.length() < spec.max_length) {
        for (EdgeIndex e : remove_parallel_edges(m.out_edges(last), m, uncovered, spec.level)) {
          TestPath extended = next;
          extended.edges.push_back(e);
          queue.push_back(std::move(extended));
        }
      }
    }
    if (queue.empty()) break;
    budget.charge();
    next = std::move(queue.front());
    queue.pop_front();
    last = next.last_vertex(m);
  } while (!next.empty());
  return std::nullopt;
}

inline std::optional<TestPath> find_shortest_path_in_range(const SutModel& m, const CoverageSpec& spec,
                                                           const EdgeSet& uncovered, VertexIndex start) {
  SearchBudget budget;
  return find_shortest_path_in_range(m, spec, uncovered, start, budget);
}

// ---------------------------------------------------------------------------
// Pivot search: bidirectional BFS for an in-range test path through one edge.
//
// Backward semi-paths end with the pivot and grow at the front toward a test
// start; forward semi-paths begin with the pivot and grow at the back toward
// a test end. A backward semi-path b and forward semi-path f join into
// b[0..|b|-1) ++ f, of length |b| + |f| - 1.
// ---------------------------------------------------------------------------

enum class Direction { Backward, Forward };

inline Direction opposite(Direction d) {
  return d == Direction::Backward ? Direction::Forward : Direction::Backward;
}

struct SemiPathFrontier {
  // One representative semi-path per length, all of which reached the
  // direction's destination set.
  std::map<std::size_t, TestPath> stored;
  std::deque<TestPath> queue;
  std::size_t min_depth = 1;      // length of semi-paths currently dequeued
  std::size_t min_depth_count = 1; // semi-paths of that length still queued
  std::size_t next_depth_count = 0;

  std::size_t smallest_stored() const { return stored.empty() ? min_depth : stored.begin()->first; }
};

struct SemiPathMaps {
  EdgeIndex pivot = 0;
  SemiPathFrontier backward;
  SemiPathFrontier forward;

  static SemiPathMaps seeded(EdgeIndex pivot) {
    SemiPathMaps s;
    s.pivot = pivot;
    s.backward.queue.push_back(TestPath{{pivot}});
    s.forward.queue.push_back(TestPath{{pivot}});
    return s;
  }

  SemiPathFrontier& frontier(Direction d) { return d == Direction::Backward ? backward : forward; }
  const SemiPathFrontier& frontier(Direction d) const {
    return d == Direction::Backward ? backward : forward;
  }
};

/// Tries to complete `semi` with a stored semi-path of the other direction.
/// On a miss, `semi` is remembered under its length if some future partner
/// (no shorter than `other_min`) could still fit within the max length.
inline std::optional<TestPath> evaluate_candidate(const TestPath& semi,
                                                  std::map<std::size_t, TestPath>& own,
                                                  const std::map<std::size_t, TestPath>& other,
                                                  Direction direction, std::size_t other_min,
                                                  const CoverageSpec& spec, const EdgeSet& uncovered) {
  const std::size_t len = semi.length();
  const std::size_t lower = (spec.min_length > len ? spec.min_length - len : 0) + 1;
  const std::size_t upper = spec.max_length + 1 - len;
  for (std::size_t i = lower; i <= upper; ++i) {
    auto hit = other.find(i);
    if (hit == other.end()) continue;
    const TestPath& backward = direction == Direction::Backward ? semi : hit->second;
    const TestPath& forward = direction == Direction::Backward ? hit->second : semi;
    TestPath joined;
    joined.edges.reserve(backward.length() + forward.length() - 1);
    joined.edges.insert(joined.edges.end(), backward.edges.begin(), backward.edges.end() - 1);
    joined.edges.insert(joined.edges.end(), forward.edges.begin(), forward.edges.end());
    return joined;
  }
  if (len + other_min <= spec.max_length + 1) {
    auto it = own.find(len);
    if (it == own.end()) {
      own.emplace(len, semi);
    } else if (spec.level == CoverageLevel::Level2 &&
               uncovered.count_distinct_in(it->second.edges) < uncovered.count_distinct_in(semi.edges)) {
      it->second = semi;
    }
  }
  return std::nullopt;
}

/// Extends `semi` by one edge at `frontier` in the given direction and queues
/// every extension. Parallel edges are filtered first. Returns the number of
/// semi-paths pushed, which is also added to `counter`.
inline std::size_t prepare_next_moves(std::deque<TestPath>& queue, const TestPath& semi,
                                      VertexIndex frontier, std::size_t& counter, Direction direction,
                                      const SutModel& m, const EdgeSet& uncovered, CoverageLevel level) {
  const auto& next = direction == Direction::Backward ? m.in_edges(frontier) : m.out_edges(frontier);
  const auto filtered = remove_parallel_edges(next, m, uncovered, level);
  for (EdgeIndex e : filtered) {
    TestPath extended;
    extended.edges.reserve(semi.length() + 1);
    if (direction == Direction::Backward) {
      extended.edges.push_back(e);
      extended.edges.insert(extended.edges.end(), semi.edges.begin(), semi.edges.end());
    } else {
      extended.edges = semi.edges;
      extended.edges.push_back(e);
    }
    queue.push_back(std::move(extended));
  }
  counter += filtered.size();
  return filtered.size();
}

/// Processes one queued semi-path of `direction`. Returns a full test path
/// when this step completes one.
inline std::optional<TestPath> directed_search_step(SemiPathMaps& state, Direction direction,
                                                    const SutModel& m, const CoverageSpec& spec,
                                                    const EdgeSet& uncovered, SearchBudget& budget) {
  SemiPathFrontier& own = state.frontier(direction);
  const SemiPathFrontier& other = state.frontier(opposite(direction));
  budget.charge();

  TestPath semi = std::move(own.queue.front());
  own.queue.pop_front();
  --own.min_depth_count;

  if (semi.length() <= spec.max_length) {
    const VertexIndex frontier =
        direction == Direction::Backward ? semi.first_vertex(m) : semi.last_vertex(m);
    const bool at_destination =
        direction == Direction::Backward ? m.is_test_start(frontier) : m.is_test_end(frontier);
    if (at_destination) {
      auto full = evaluate_candidate(semi, own.stored, other.stored, direction, other.min_depth, spec,
                                     uncovered);
      if (full) return full;
    }
    // An extension of length |semi|+1 joins partners of length >= shortest
    // into at least |semi| + shortest edges. Partners are either stored
    // already or still to be dequeued (length >= other.min_depth).
    const std::size_t shortest_partner = std::min(other.min_depth, other.smallest_stored());
    if (semi.length() + shortest_partner <= spec.max_length) {
      prepare_next_moves(own.queue, semi, frontier, own.next_depth_count, direction, m, uncovered,
                         spec.level);
    }
  }

  if (own.min_depth_count == 0) {
    own.min_depth_count = own.next_depth_count;
    own.next_depth_count = 0;
    ++own.min_depth;
  }
  return std::nullopt;
}

/// Finds a test path containing `pivot` with length in range, or nothing if
/// the pivot cannot lie on any such path. Frontiers alternate one semi-path
/// at a time, backward first.
inline std::optional<TestPath> find_shortest_path_in_range_for_edge(EdgeIndex pivot, const SutModel& m,
                                                                    const CoverageSpec& spec,
                                                                    const EdgeSet& uncovered,
                                                                    SearchBudget& budget) {
  SemiPathMaps state = SemiPathMaps::seeded(pivot);
  while (!state.backward.queue.empty() || !state.forward.queue.empty()) {
    if (!state.backward.queue.empty()) {
      if (auto p = directed_search_step(state, Direction::Backward, m, spec, uncovered, budget)) return p;
    }
    if (!state.forward.queue.empty()) {
      if (auto p = directed_search_step(state, Direction::Forward, m, spec, uncovered, budget)) return p;
    }
  }
  return std::nullopt;
}

inline std::optional<TestPath> find_shortest_path_in_range_for_edge(EdgeIndex pivot, const SutModel& m,
                                                                    const CoverageSpec& spec,
                                                                    const EdgeSet& uncovered) {
  SearchBudget budget;
  return find_shortest_path_in_range_for_edge(pivot, m, spec, uncovered, budget);
}

struct FsmtOptions {
  // Visit uncovered edges in a seeded random order instead of declaration order.
  bool shuffle_uncovered = false;
  std::uint64_t seed = 0;
  SearchLimits limits;
};

/// FSMT generation. Phase one finds the shortest in-range path from every
/// test start; with level-2 coverage, phase two threads a path through each
/// edge still uncovered, recording edges no in-range path can contain.
inline TestPathSet generate_fsmt(const SutModel& m, const CoverageSpec& spec, const FsmtOptions& options = {}) {
  spec.validate();
  SearchBudget budget(options.limits);
  TestPathSet result;
  EdgeSet uncovered = EdgeSet::all(m);

  for (VertexIndex start : m.test_starts()) {
    if (auto p = find_shortest_path_in_range(m, spec, uncovered, start, budget)) {
      uncovered.erase_all(p->edges);
      result.paths.push_back(std::move(*p));
    } else {
      result.infeasible_starts.push_back(start);
    }
  }

  if (spec.level == CoverageLevel::Level2) {
    std::vector<EdgeIndex> order(m.edge_count());
    std::iota(order.begin(), order.end(), EdgeIndex{0});
    if (options.shuffle_uncovered) {
      std::mt19937_64 rng(options.seed);
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (EdgeIndex pivot : order) {
      if (!uncovered.contains(pivot)) continue;
      uncovered.erase(pivot);
      if (auto p = find_shortest_path_in_range_for_edge(pivot, m, spec, uncovered, budget)) {
        uncovered.erase_all(p->edges);
        result.paths.push_back(std::move(*p));
      } else {
        result.uncoverable_edges.push_back(pivot);
      }
    }
    std::sort(result.uncoverable_edges.begin(), result.uncoverable_edges.end());
  }

  finalize_status(result, m, spec.level);
  return result;
}

}  // namespace fsmt
