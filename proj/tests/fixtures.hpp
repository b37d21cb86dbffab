#pragma once

#include <string>
#include <vector>

#include "fsmt/model.hpp"
#include "fsmt/path.hpp"

namespace fixtures {

inline fsmt::SutModel make(const std::string& name, std::vector<std::string> vertices,
                           std::vector<fsmt::ModelDescription::EdgeDecl> edges, std::vector<std::string> starts,
                           std::vector<std::string> ends) {
  fsmt::ModelDescription d;
  d.name = name;
  d.vertices = std::move(vertices);
  d.edges = std::move(edges);
  d.machine_start = starts.front();
  d.test_starts = std::move(starts);
  d.machine_ends = {ends.back()};
  d.test_ends = std::move(ends);
  return fsmt::SutModel::build(d);
}

inline fsmt::SutModel single() { return make("G_SINGLE", {"A", "B"}, {{"e1", "A", "B", ""}}, {"A"}, {"B"}); }

inline fsmt::SutModel parallel() {
  return make("G_PAR", {"A", "B", "C"}, {{"e1", "A", "B", ""}, {"e2", "A", "B", ""}, {"e3", "B", "C", ""}}, {"A"},
              {"C"});
}

inline fsmt::SutModel loop() {
  return make("G_LOOP", {"A", "B", "C"}, {{"e1", "A", "B", ""}, {"e2", "B", "A", ""}, {"e3", "B", "C", ""}}, {"A"},
              {"C"});
}

inline fsmt::SutModel diamond() {
  return make("G_DIAMOND", {"A", "B", "C", "D"},
              {{"e1", "A", "B", ""}, {"e2", "A", "C", ""}, {"e3", "B", "D", ""}, {"e4", "C", "D", ""}}, {"A"}, {"D"});
}

inline fsmt::SutModel chain() {
  return make("CHAIN", {"A", "B", "C", "D"}, {{"e1", "A", "B", ""}, {"e2", "B", "C", ""}, {"e3", "C", "D", ""}},
              {"A"}, {"D"});
}

// Edge indices in these fixtures follow declaration order: e1 -> 0, e2 -> 1, ...
inline fsmt::TestPath path(std::initializer_list<fsmt::EdgeIndex> one_based) {
  fsmt::TestPath p;
  for (auto e : one_based) p.edges.push_back(e - 1);
  return p;
}

inline fsmt::CoverageSpec l1(std::size_t lo, std::size_t hi) {
  return fsmt::CoverageSpec::make(fsmt::CoverageLevel::Level1, lo, hi);
}
inline fsmt::CoverageSpec l2(std::size_t lo, std::size_t hi) {
  return fsmt::CoverageSpec::make(fsmt::CoverageLevel::Level2, lo, hi);
}

}  // namespace fixtures
