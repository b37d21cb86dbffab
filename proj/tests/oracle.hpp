#pragma once

// Brute-force reference implementations used as ground truth in tests.
// Kept deliberately naive: walks are grown layer by layer over raw
// (source, target) pairs and never share code with the library's searches.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace oracle {

using Walk = std::vector<std::size_t>;

// Every walk of length 1..max_len, grouped by length.
inline std::vector<std::vector<Walk>> walks_by_length(const fsmt::SutModel& m, std::size_t max_len) {
  std::vector<std::vector<Walk>> layers(max_len + 1);
  if (max_len == 0) return layers;
  for (std::size_t e = 0; e < m.edge_count(); ++e) layers[1].push_back({e});
  for (std::size_t k = 2; k <= max_len; ++k) {
    for (const Walk& w : layers[k - 1]) {
      const auto tail = m.edges()[w.back()].target;
      for (std::size_t e = 0; e < m.edge_count(); ++e) {
        if (m.edges()[e].source != tail) continue;
        Walk next = w;
        next.push_back(e);
        layers[k].push_back(std::move(next));
      }
    }
  }
  return layers;
}

inline std::set<Walk> walks_in_range(const fsmt::SutModel& m, std::size_t lo, std::size_t hi) {
  std::set<Walk> out;
  const auto layers = walks_by_length(m, hi);
  for (std::size_t k = lo; k <= hi; ++k) out.insert(layers[k].begin(), layers[k].end());
  return out;
}

inline bool is_test_path(const fsmt::SutModel& m, const Walk& w) {
  const auto& ts = m.test_starts();
  const auto& te = m.test_ends();
  const auto first = m.edges()[w.front()].source;
  const auto last = m.edges()[w.back()].target;
  return std::find(ts.begin(), ts.end(), first) != ts.end() && std::find(te.begin(), te.end(), last) != te.end();
}

inline std::vector<Walk> test_paths(const fsmt::SutModel& m, std::size_t lo, std::size_t hi) {
  std::vector<Walk> out;
  for (const auto& w : walks_in_range(m, lo, hi)) {
    if (is_test_path(m, w)) out.push_back(w);
  }
  return out;
}

// Shortest in-range test path length per start vertex, from one enumeration.
inline std::vector<std::optional<std::size_t>> min_lengths_by_start(const fsmt::SutModel& m, std::size_t lo,
                                                                    std::size_t hi) {
  std::vector<std::optional<std::size_t>> best(m.vertex_count());
  for (const auto& w : test_paths(m, lo, hi)) {
    auto& b = best[m.edges()[w.front()].source];
    if (!b || w.size() < *b) b = w.size();
  }
  return best;
}

inline std::set<std::size_t> covered_edges(const fsmt::SutModel& m, std::size_t lo, std::size_t hi) {
  std::set<std::size_t> out;
  for (const auto& w : test_paths(m, lo, hi)) out.insert(w.begin(), w.end());
  return out;
}

// Random multigraph with self-loops and parallels allowed. Vertex v0 is the
// machine start; test starts and ends are random nonempty subsets.
inline fsmt::SutModel random_model(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  const std::size_t n = pick(2, max_vertices);
  const std::size_t e = pick(1, max_edges);
  fsmt::ModelDescription d;
  d.name = "R";
  for (std::size_t i = 0; i < n; ++i) d.vertices.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < e; ++i) {
    d.edges.push_back({"e" + std::to_string(i + 1), d.vertices[pick(0, n - 1)], d.vertices[pick(0, n - 1)], ""});
  }
  d.machine_start = "v0";
  d.test_starts.push_back("v0");
  for (std::size_t i = 1; i < n; ++i) {
    if (coin(0.2)) d.test_starts.push_back(d.vertices[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(0.3)) d.test_ends.push_back(d.vertices[i]);
  }
  if (d.test_ends.empty()) d.test_ends.push_back(d.vertices[n - 1]);
  d.machine_ends.push_back(d.test_ends.back());
  return fsmt::SutModel::build(d);
}

inline fsmt::TestPath to_path(const Walk& w) { return fsmt::TestPath{w}; }

}  // namespace oracle
