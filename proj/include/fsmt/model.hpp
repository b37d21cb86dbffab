#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsmt/error.hpp"

namespace fsmt {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  std::string id;
  VertexIndex source = 0;
  VertexIndex target = 0;
  std::string label;

  bool operator==(const Edge&) const = default;
};

// Name-based description of a model, as read from a file or assembled by a
// generator. SutModel::build turns it into the validated index-based form.
struct ModelDescription {
  struct EdgeDecl {
    std::string id;
    std::string source;
    std::string target;
    std::string label;
  };

  std::string name;
  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
  std::optional<std::string> machine_start;
  std::vector<std::string> machine_ends;
  std::vector<std::string> test_starts;
  std::vector<std::string> test_ends;
};

/// SUT state machine as a directed multigraph with allowed test-path start and
/// end states. Immutable once built; vertex and edge order is the declaration
/// order and every algorithm iterates in that order.
///
/// Vertex sets (machine ends, test starts, test ends) are kept sorted by
/// vertex index, so two models declaring the same sets in a different order
/// compare equal.
class SutModel {
public:
  static SutModel build(const ModelDescription& desc);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  VertexIndex source(EdgeIndex e) const { return edges_[e].source; }
  VertexIndex target(EdgeIndex e) const { return edges_[e].target; }
  const std::string& vertex_name(VertexIndex v) const { return vertices_.at(v); }

  VertexIndex machine_start() const noexcept { return machine_start_; }
  const std::vector<VertexIndex>& machine_ends() const noexcept { return machine_ends_; }
  const std::vector<VertexIndex>& test_starts() const noexcept { return test_starts_; }
  const std::vector<VertexIndex>& test_ends() const noexcept { return test_ends_; }

  bool is_test_start(VertexIndex v) const { return is_test_start_[v]; }
  bool is_test_end(VertexIndex v) const { return is_test_end_[v]; }
  bool is_machine_end(VertexIndex v) const { return is_machine_end_[v]; }

  // Edges leaving / entering v, in declaration order.
  const std::vector<EdgeIndex>& out_edges(VertexIndex v) const { return out_edges_[v]; }
  const std::vector<EdgeIndex>& in_edges(VertexIndex v) const { return in_edges_[v]; }

  std::optional<VertexIndex> find_vertex(std::string_view id) const {
    auto it = vertex_lookup_.find(std::string(id));
    if (it == vertex_lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeIndex> find_edge(std::string_view id) const {
    auto it = edge_lookup_.find(std::string(id));
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
  }

  ModelDescription describe() const;

  friend bool operator==(const SutModel& a, const SutModel& b) {
    return a.name_ == b.name_ && a.vertices_ == b.vertices_ && a.edges_ == b.edges_ &&
           a.machine_start_ == b.machine_start_ && a.machine_ends_ == b.machine_ends_ &&
           a.test_starts_ == b.test_starts_ && a.test_ends_ == b.test_ends_;
  }

private:
  SutModel() = default;

  std::string name_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  VertexIndex machine_start_ = 0;
  std::vector<VertexIndex> machine_ends_;
  std::vector<VertexIndex> test_starts_;
  std::vector<VertexIndex> test_ends_;

  std::vector<bool> is_test_start_;
  std::vector<bool> is_test_end_;
  std::vector<bool> is_machine_end_;
  std::vector<std::vector<EdgeIndex>> out_edges_;
  std::vector<std::vector<EdgeIndex>> in_edges_;
  std::unordered_map<std::string, VertexIndex> vertex_lookup_;
  std::unordered_map<std::string, EdgeIndex> edge_lookup_;
};

namespace detail {

inline bool is_identifier_char(char c) {
  return !(c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '"' || c == '#');
}

inline bool is_valid_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_identifier_char);
}

}  // namespace detail

inline SutModel SutModel::build(const ModelDescription& desc) {
  SutModel m;
  if (!detail::is_valid_identifier(desc.name)) {
    throw ModelError("model name must be a non-empty identifier");
  }
  m.name_ = desc.name;
  if (desc.vertices.empty()) throw ModelError("model declares no vertices");
  if (desc.edges.empty()) throw ModelError("model declares no edges");

  for (const auto& v : desc.vertices) {
    if (!detail::is_valid_identifier(v)) throw ModelError("invalid vertex id '" + v + "'");
    if (!m.vertex_lookup_.emplace(v, m.vertices_.size()).second) {
      throw ModelError("duplicate vertex id '" + v + "'");
    }
    m.vertices_.push_back(v);
  }

  auto resolve = [&](const std::string& v, const std::string& context) {
    auto it = m.vertex_lookup_.find(v);
    if (it == m.vertex_lookup_.end()) {
      throw ModelError(context + " references undeclared vertex '" + v + "'");
    }
    return it->second;
  };

  const std::size_t n = m.vertices_.size();
  m.out_edges_.resize(n);
  m.in_edges_.resize(n);
  for (const auto& e : desc.edges) {
    if (!detail::is_valid_identifier(e.id)) throw ModelError("invalid edge id '" + e.id + "'");
    const EdgeIndex idx = m.edges_.size();
    if (!m.edge_lookup_.emplace(e.id, idx).second) {
      throw ModelError("duplicate edge id '" + e.id + "'");
    }
    Edge edge{e.id, resolve(e.source, "edge " + e.id), resolve(e.target, "edge " + e.id), e.label};
    m.out_edges_[edge.source].push_back(idx);
    m.in_edges_[edge.target].push_back(idx);
    m.edges_.push_back(std::move(edge));
  }

  auto resolve_set = [&](const std::vector<std::string>& names, const std::string& context,
                         std::vector<bool>& flags) {
    flags.assign(n, false);
    std::vector<VertexIndex> out;
    for (const auto& v : names) {
      const VertexIndex i = resolve(v, context);
      if (flags[i]) throw ModelError(context + " lists vertex '" + v + "' twice");
      flags[i] = true;
      out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  if (!desc.machine_start) throw ModelError("model has no machine_start");
  m.machine_start_ = resolve(*desc.machine_start, "machine_start");
  m.machine_ends_ = resolve_set(desc.machine_ends, "machine_ends", m.is_machine_end_);
  m.test_starts_ = resolve_set(desc.test_starts, "test_starts", m.is_test_start_);
  m.test_ends_ = resolve_set(desc.test_ends, "test_ends", m.is_test_end_);

  if (!m.is_test_start_[m.machine_start_]) {
    throw ModelError("machine start '" + m.vertices_[m.machine_start_] +
                     "' is not a test start (requires v_s ∈ V_ts)");
  }
  for (VertexIndex v : m.machine_ends_) {
    if (!m.is_test_end_[v]) {
      throw ModelError("machine end '" + m.vertices_[v] + "' is not a test end (requires V_e ⊆ V_te)");
    }
  }
  return m;
}

inline ModelDescription SutModel::describe() const {
  ModelDescription d;
  d.name = name_;
  d.vertices = vertices_;
  for (const auto& e : edges_) {
    d.edges.push_back({e.id, vertices_[e.source], vertices_[e.target], e.label});
  }
  d.machine_start = vertices_[machine_start_];
  auto names = [&](const std::vector<VertexIndex>& s) {
    std::vector<std::string> out;
    for (VertexIndex v : s) out.push_back(vertices_[v]);
    return out;
  };
  d.machine_ends = names(machine_ends_);
  d.test_starts = names(test_starts_);
  d.test_ends = names(test_ends_);
  return d;
}

// ---------------------------------------------------------------------------
// Model file format
//
// Line oriented, UTF-8. '#' starts a comment outside of quoted strings.
//
//   name <id>
//   vertices <id> <id> ...          (may repeat; appends)
//   edge <id> <source> <target> ["label"]
//   machine_start <id>
//   machine_ends <id> ...           (may be empty)
//   test_starts <id> ...
//   test_ends <id> ...
//
// Identifiers are runs of characters other than whitespace, '"' and '#'.
// Labels are double-quoted; '\\', '\"', '\n' and '\t' are the only escapes.
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  std::string text;
  std::size_t column = 0;
  bool quoted = false;
};

inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    Token tok;
    tok.column = i + 1;
    if (c == '"') {
      tok.quoted = true;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char d = line[i];
        if (d == '"') {
          closed = true;
          ++i;
          break;
        }
        if (d == '\\') {
          if (i + 1 >= line.size()) throw ParseError(line_no, i + 1, "dangling escape in string");
          const char esc = line[i + 1];
          switch (esc) {
            case '\\': tok.text += '\\'; break;
            case '"': tok.text += '"'; break;
            case 'n': tok.text += '\n'; break;
            case 't': tok.text += '\t'; break;
            default:
              throw ParseError(line_no, i + 1, std::string("unknown escape '\\") + esc + "'");
          }
          i += 2;
          continue;
        }
        tok.text += d;
        ++i;
      }
      if (!closed) throw ParseError(line_no, tok.column, "unterminated string");
      if (i < line.size() && is_identifier_char(line[i])) {
        throw ParseError(line_no, i + 1, "expected whitespace after string");
      }
    } else {
      while (i < line.size() && is_identifier_char(line[i])) tok.text += line[i++];
      if (i < line.size() && line[i] == '"') {
        throw ParseError(line_no, i + 1, "unexpected '\"' inside identifier");
      }
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace detail

inline SutModel parse_model(std::string_view text) {
  ModelDescription desc;
  bool have_name = false;
  bool have_ends = false;
  bool have_starts = false;
  bool have_test_ends = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    const auto tokens = detail::tokenize_line(line, line_no);
    if (tokens.empty()) continue;
    const auto& key = tokens.front();
    if (key.quoted) throw ParseError(line_no, key.column, "expected a directive, found a string");

    auto identifiers = [&](std::size_t from) {
      std::vector<std::string> ids;
      for (std::size_t i = from; i < tokens.size(); ++i) {
        if (tokens[i].quoted) throw ParseError(line_no, tokens[i].column, "expected an identifier");
        ids.push_back(tokens[i].text);
      }
      return ids;
    };
    auto once = [&](bool& seen) {
      if (seen) throw ParseError(line_no, key.column, "directive '" + key.text + "' repeated");
      seen = true;
    };

    if (key.text == "name") {
      once(have_name);
      if (tokens.size() != 2) throw ParseError(line_no, key.column, "'name' takes exactly one identifier");
      desc.name = identifiers(1).front();
    } else if (key.text == "vertices") {
      for (auto& v : identifiers(1)) desc.vertices.push_back(std::move(v));
    } else if (key.text == "edge") {
      if (tokens.size() < 4 || tokens.size() > 5) {
        throw ParseError(line_no, key.column, "'edge' takes <id> <source> <target> [\"label\"]");
      }
      for (std::size_t i = 1; i < 4; ++i) {
        if (tokens[i].quoted) throw ParseError(line_no, tokens[i].column, "expected an identifier");
      }
      ModelDescription::EdgeDecl e{tokens[1].text, tokens[2].text, tokens[3].text, {}};
      if (tokens.size() == 5) {
        if (!tokens[4].quoted) throw ParseError(line_no, tokens[4].column, "edge label must be quoted");
        e.label = tokens[4].text;
      }
      desc.edges.push_back(std::move(e));
    } else if (key.text == "machine_start") {
      if (desc.machine_start) throw ParseError(line_no, key.column, "directive 'machine_start' repeated");
      if (tokens.size() != 2) {
        throw ParseError(line_no, key.column, "'machine_start' takes exactly one identifier");
      }
      desc.machine_start = identifiers(1).front();
    } else if (key.text == "machine_ends") {
      once(have_ends);
      desc.machine_ends = identifiers(1);
    } else if (key.text == "test_starts") {
      once(have_starts);
      desc.test_starts = identifiers(1);
    } else if (key.text == "test_ends") {
      once(have_test_ends);
      desc.test_ends = identifiers(1);
    } else {
      throw ParseError(line_no, key.column, "unknown directive '" + key.text + "'");
    }
  }

  if (!have_name) throw ParseError(line_no, 1, "missing 'name' directive");
  if (!desc.machine_start) throw ParseError(line_no, 1, "missing 'machine_start' directive");
  if (!have_starts) throw ParseError(line_no, 1, "missing 'test_starts' directive");
  if (!have_test_ends) throw ParseError(line_no, 1, "missing 'test_ends' directive");
  return SutModel::build(desc);
}

inline std::string serialize_model(const SutModel& m) {
  std::ostringstream out;
  out << "name " << m.name() << '\n';
  out << "vertices";
  for (const auto& v : m.vertices()) out << ' ' << v;
  out << '\n';
  for (const auto& e : m.edges()) {
    out << "edge " << e.id << ' ' << m.vertex_name(e.source) << ' ' << m.vertex_name(e.target);
    if (!e.label.empty()) out << ' ' << detail::quote(e.label);
    out << '\n';
  }
  auto set_line = [&](const char* key, const std::vector<VertexIndex>& s) {
    out << key;
    for (VertexIndex v : s) out << ' ' << m.vertex_name(v);
    out << '\n';
  };
  out << "machine_start " << m.vertex_name(m.machine_start()) << '\n';
  set_line("machine_ends", m.machine_ends());
  set_line("test_starts", m.test_starts());
  set_line("test_ends", m.test_ends());
  return out.str();
}

// Structured export mirroring the file fields.
inline nlohmann::json model_to_json(const SutModel& m) {
  nlohmann::json j;
  j["name"] = m.name();
  j["vertices"] = m.vertices();
  auto edges = nlohmann::json::array();
  for (const auto& e : m.edges()) {
    edges.push_back({{"id", e.id},
                     {"source", m.vertex_name(e.source)},
                     {"target", m.vertex_name(e.target)},
                     {"label", e.label}});
  }
  j["edges"] = std::move(edges);
  const auto d = m.describe();
  j["machine_start"] = *d.machine_start;
  j["machine_ends"] = d.machine_ends;
  j["test_starts"] = d.test_starts;
  j["test_ends"] = d.test_ends;
  return j;
}

}  // namespace fsmt
