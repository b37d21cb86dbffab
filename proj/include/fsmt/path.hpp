#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fsmt/error.hpp"
#include "fsmt/model.hpp"

namespace fsmt {

enum class CoverageLevel { Level1 = 1, Level2 = 2 };

inline CoverageLevel coverage_level_from_int(int level) {
  if (level == 1) return CoverageLevel::Level1;
  if (level == 2) return CoverageLevel::Level2;
  throw ModelError("coverage level must be 1 or 2, got " + std::to_string(level));
}

inline int to_int(CoverageLevel level) { return static_cast<int>(level); }

// Coverage switch plus allowed path length range (in edges, inclusive).
struct CoverageSpec {
  CoverageLevel level = CoverageLevel::Level1;
  std::size_t min_length = 1;
  std::size_t max_length = 1;

  static CoverageSpec make(CoverageLevel level, std::size_t min_length, std::size_t max_length) {
    CoverageSpec s{level, min_length, max_length};
    s.validate();
    return s;
  }

  void validate() const {
    if (min_length < 1) throw ModelError("min length must be at least 1");
    if (min_length > max_length) {
      throw ModelError("min length " + std::to_string(min_length) + " exceeds max length " +
                       std::to_string(max_length));
    }
  }

  bool in_range(std::size_t length) const { return min_length <= length && length <= max_length; }
};

// A walk through the model. Edges may repeat.
struct TestPath {
  std::vector<EdgeIndex> edges;

  std::size_t length() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }

  VertexIndex first_vertex(const SutModel& m) const { return m.source(edges.front()); }
  VertexIndex last_vertex(const SutModel& m) const { return m.target(edges.back()); }

  bool contains(EdgeIndex e) const {
    for (EdgeIndex x : edges) {
      if (x == e) return true;
    }
    return false;
  }

  // Consecutive edges share a vertex.
  bool is_chained(const SutModel& m) const {
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (m.target(edges[i - 1]) != m.source(edges[i])) return false;
    }
    return true;
  }

  std::vector<VertexIndex> vertices(const SutModel& m) const {
    std::vector<VertexIndex> out;
    if (edges.empty()) return out;
    out.push_back(first_vertex(m));
    for (EdgeIndex e : edges) out.push_back(m.target(e));
    return out;
  }

  bool operator==(const TestPath&) const = default;
  auto operator<=>(const TestPath&) const = default;
};

// Membership set over edge indices of one model; iteration is ascending.
class EdgeSet {
public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t universe, bool full = false)
      : flags_(universe, full ? 1 : 0), size_(full ? universe : 0) {}

  static EdgeSet all(const SutModel& m) { return EdgeSet(m.edge_count(), true); }

  bool contains(EdgeIndex e) const { return e < flags_.size() && flags_[e] != 0; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t universe() const noexcept { return flags_.size(); }

  void insert(EdgeIndex e) {
    if (!flags_[e]) {
      flags_[e] = 1;
      ++size_;
    }
  }
  void erase(EdgeIndex e) {
    if (e < flags_.size() && flags_[e]) {
      flags_[e] = 0;
      --size_;
    }
  }
  void erase_all(std::span<const EdgeIndex> edges) {
    for (EdgeIndex e : edges) erase(e);
  }

  std::vector<EdgeIndex> to_vector() const {
    std::vector<EdgeIndex> out;
    out.reserve(size_);
    for (EdgeIndex e = 0; e < flags_.size(); ++e) {
      if (flags_[e]) out.push_back(e);
    }
    return out;
  }

  // Number of distinct members among `edges`.
  std::size_t count_distinct_in(std::span<const EdgeIndex> edges) const {
    std::vector<EdgeIndex> seen;
    for (EdgeIndex e : edges) {
      if (contains(e) && std::find(seen.begin(), seen.end(), e) == seen.end()) seen.push_back(e);
    }
    return seen.size();
  }

  bool operator==(const EdgeSet&) const = default;

private:
  std::vector<char> flags_;
  std::size_t size_ = 0;
};

enum class GenerationStatus { Complete, Infeasible };

inline std::string_view to_string(GenerationStatus s) {
  return s == GenerationStatus::Complete ? "complete" : "infeasible";
}

struct TestPathSet {
  std::vector<TestPath> paths;
  std::vector<EdgeIndex> uncovered_edges;     // edges absent from every path
  std::vector<EdgeIndex> uncoverable_edges;   // no in-range test path can contain them
  std::vector<VertexIndex> infeasible_starts; // test starts with no in-range path
  GenerationStatus status = GenerationStatus::Complete;

  bool operator==(const TestPathSet&) const = default;
};

// Union of edges used by `paths`.
inline EdgeSet edge_union(std::span<const TestPath> paths, std::size_t universe) {
  EdgeSet s(universe);
  for (const auto& p : paths) {
    for (EdgeIndex e : p.edges) s.insert(e);
  }
  return s;
}

// Fills uncovered_edges and status from the other fields.
inline void finalize_status(TestPathSet& set, const SutModel& m, CoverageLevel level) {
  const EdgeSet used = edge_union(set.paths, m.edge_count());
  set.uncovered_edges.clear();
  for (EdgeIndex e = 0; e < m.edge_count(); ++e) {
    if (!used.contains(e)) set.uncovered_edges.push_back(e);
  }
  bool complete = set.infeasible_starts.empty();
  if (complete && level == CoverageLevel::Level2) {
    EdgeSet uncoverable(m.edge_count());
    for (EdgeIndex e : set.uncoverable_edges) uncoverable.insert(e);
    for (EdgeIndex e : set.uncovered_edges) {
      if (!uncoverable.contains(e)) complete = false;
    }
  }
  set.status = complete ? GenerationStatus::Complete : GenerationStatus::Infeasible;
}

// Caps exploration work so pathological inputs fail instead of exhausting memory.
struct SearchLimits {
  std::size_t max_explored = 10'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class SearchBudget {
public:
  SearchBudget() = default;
  explicit SearchBudget(SearchLimits limits) : limits_(limits) {}

  void charge(std::size_t n = 1) {
    used_ += n;
    if (used_ > limits_.max_explored) {
      throw ResourceLimitError("exploration cap of " + std::to_string(limits_.max_explored) +
                               " exceeded");
    }
    if (limits_.deadline && (used_ & 0x3ff) < n && std::chrono::steady_clock::now() > *limits_.deadline) {
      throw TimeoutError("time limit exceeded");
    }
  }

  std::size_t used() const noexcept { return used_; }

private:
  SearchLimits limits_;
  std::size_t used_ = 0;
};

// ---------------------------------------------------------------------------
// Path-set document (JSON)
// ---------------------------------------------------------------------------

struct PathSetDocument {
  std::string model;
  std::string strategy;
  CoverageSpec spec;
  TestPathSet set;
};

inline nlohmann::json path_set_to_json(const SutModel& m, const PathSetDocument& doc) {
  using nlohmann::json;
  auto edge_ids = [&](std::span<const EdgeIndex> es) {
    json a = json::array();
    for (EdgeIndex e : es) a.push_back(m.edge(e).id);
    return a;
  };
  auto vertex_ids = [&](std::span<const VertexIndex> vs) {
    json a = json::array();
    for (VertexIndex v : vs) a.push_back(m.vertex_name(v));
    return a;
  };
  json paths = json::array();
  for (const auto& p : doc.set.paths) {
    const auto vs = p.vertices(m);
    paths.push_back({{"edges", edge_ids(p.edges)}, {"vertices", vertex_ids(vs)}, {"length", p.length()}});
  }
  json j;
  j["model"] = doc.model;
  j["strategy"] = doc.strategy;
  j["coverage"] = to_int(doc.spec.level);
  j["min_length"] = doc.spec.min_length;
  j["max_length"] = doc.spec.max_length;
  j["status"] = std::string(to_string(doc.set.status));
  j["paths"] = std::move(paths);
  j["uncovered_edges"] = edge_ids(doc.set.uncovered_edges);
  j["uncoverable_edges"] = edge_ids(doc.set.uncoverable_edges);
  j["infeasible_starts"] = vertex_ids(doc.set.infeasible_starts);
  return j;
}

inline PathSetDocument path_set_from_json(const SutModel& m, const nlohmann::json& j) {
  try {
    PathSetDocument doc;
    doc.model = j.value("model", std::string{});
    doc.strategy = j.value("strategy", std::string{});
    doc.spec = CoverageSpec::make(coverage_level_from_int(j.at("coverage").get<int>()),
                                  j.at("min_length").get<std::size_t>(),
                                  j.at("max_length").get<std::size_t>());
    auto edge = [&](const nlohmann::json& id) {
      const auto s = id.get<std::string>();
      auto e = m.find_edge(s);
      if (!e) throw ModelError("path set references unknown edge '" + s + "'");
      return *e;
    };
    auto vertex = [&](const nlohmann::json& id) {
      const auto s = id.get<std::string>();
      auto v = m.find_vertex(s);
      if (!v) throw ModelError("path set references unknown vertex '" + s + "'");
      return *v;
    };
    for (const auto& p : j.at("paths")) {
      TestPath path;
      for (const auto& e : p.at("edges")) path.edges.push_back(edge(e));
      doc.set.paths.push_back(std::move(path));
    }
    for (const auto& e : j.value("uncovered_edges", nlohmann::json::array())) {
      doc.set.uncovered_edges.push_back(edge(e));
    }
    for (const auto& e : j.value("uncoverable_edges", nlohmann::json::array())) {
      doc.set.uncoverable_edges.push_back(edge(e));
    }
    for (const auto& v : j.value("infeasible_starts", nlohmann::json::array())) {
      doc.set.infeasible_starts.push_back(vertex(v));
    }
    const auto status = j.value("status", std::string("complete"));
    if (status == "complete") {
      doc.set.status = GenerationStatus::Complete;
    } else if (status == "infeasible") {
      doc.set.status = GenerationStatus::Infeasible;
    } else {
      throw ModelError("unknown path set status '" + status + "'");
    }
    return doc;
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("malformed path set document: ") + ex.what());
  }
}

}  // namespace fsmt
