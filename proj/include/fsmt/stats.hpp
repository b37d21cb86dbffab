#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/hawick_circuits.hpp>
#include <boost/rational.hpp>

#include "fsmt/model.hpp"

namespace fsmt {

using Ratio = boost::rational<std::int64_t>;

inline constexpr std::size_t kDefaultCycleCap = 10'000;

// Summary properties of a model.
//
// Cycles are simple directed circuits of the multigraph: two circuits through
// the same vertices but different parallel edges count separately, and a
// self-loop is a circuit of length 1.
struct GraphStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t simple_cycle_count = 0;
  Ratio avg_cycle_length{0};
  bool cycles_partial = false;  // enumeration stopped at the cap
  std::size_t parallel_edge_count = 0;
  std::size_t parallel_edge_group_count = 0;
  Ratio avg_in_degree{0};
  Ratio avg_out_degree{0};
  Ratio avg_degree{0};
  std::size_t test_start_count = 0;
  std::size_t test_end_count = 0;
  std::size_t start_end_overlap_count = 0;
  std::size_t machine_end_count = 0;

  bool operator==(const GraphStats&) const = default;
};

struct CycleCount {
  std::size_t count = 0;
  std::size_t total_length = 0;
  bool partial = false;
};

namespace detail {

struct CapReached {};

struct CircuitCounter {
  CycleCount* result;
  std::size_t cap;

  template <typename Path, typename Graph>
  void cycle(const Path& p, const Graph&) {
    if (result->count == cap) {
      result->partial = true;
      throw CapReached{};
    }
    ++result->count;
    result->total_length += p.size();
  }
};

}  // namespace detail

// Simple directed circuits, stopping after `cap` of them.
inline CycleCount count_simple_cycles(const SutModel& m, std::size_t cap = kDefaultCycleCap) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph g(m.vertex_count());
  for (const auto& e : m.edges()) boost::add_edge(e.source, e.target, g);
  CycleCount result;
  try {
    boost::hawick_circuits(g, detail::CircuitCounter{&result, cap});
  } catch (const detail::CapReached&) {
  }
  return result;
}

inline GraphStats graph_stats(const SutModel& m, std::size_t cycle_cap = kDefaultCycleCap) {
  GraphStats s;
  s.vertex_count = m.vertex_count();
  s.edge_count = m.edge_count();

  const CycleCount cycles = count_simple_cycles(m, cycle_cap);
  s.simple_cycle_count = cycles.count;
  s.cycles_partial = cycles.partial;
  if (cycles.count > 0) {
    s.avg_cycle_length = Ratio(static_cast<std::int64_t>(cycles.total_length),
                               static_cast<std::int64_t>(cycles.count));
  }

  std::map<std::pair<VertexIndex, VertexIndex>, std::size_t> multiplicity;
  for (const auto& e : m.edges()) ++multiplicity[{e.source, e.target}];
  for (const auto& [endpoints, k] : multiplicity) {
    if (k > 1) {
      s.parallel_edge_count += k;
      ++s.parallel_edge_group_count;
    }
  }

  // Every edge adds one to an in-degree and one to an out-degree.
  const auto v = static_cast<std::int64_t>(s.vertex_count);
  const auto e = static_cast<std::int64_t>(s.edge_count);
  s.avg_in_degree = Ratio(e, v);
  s.avg_out_degree = Ratio(e, v);
  s.avg_degree = s.avg_in_degree + s.avg_out_degree;

  s.test_start_count = m.test_starts().size();
  s.test_end_count = m.test_ends().size();
  s.machine_end_count = m.machine_ends().size();
  for (VertexIndex x : m.test_starts()) {
    if (m.is_test_end(x)) ++s.start_end_overlap_count;
  }
  return s;
}

}  // namespace fsmt
