#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "fsmt/coverage.hpp"
#include "fsmt/defects.hpp"
#include "fsmt/fsmt_strategy.hpp"
#include "fsmt/metrics.hpp"
#include "fsmt/model.hpp"
#include "fsmt/nsr_strategy.hpp"
#include "fsmt/path.hpp"

namespace fsmt {

enum class Strategy { Fsmt, Nsr };

inline const char* to_string(Strategy s) { return s == Strategy::Fsmt ? "fsmt" : "nsr"; }

inline Strategy strategy_from_string(std::string_view s) {
  if (s == "fsmt") return Strategy::Fsmt;
  if (s == "nsr") return Strategy::Nsr;
  throw ModelError("unknown strategy '" + std::string(s) + "' (expected fsmt or nsr)");
}

struct LengthRange {
  std::size_t min_length = 1;
  std::size_t max_length = 1;

  bool operator==(const LengthRange&) const = default;
  auto operator<=>(const LengthRange&) const = default;
};

// The four experiment ranges: (2,4), (2,6), (2,8), (4,8).
inline std::vector<LengthRange> default_length_ranges() { return {{2, 4}, {2, 6}, {2, 8}, {4, 8}}; }

struct GenerationOptions {
  SearchLimits limits;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  bool shuffle_uncovered = false;
  std::uint64_t seed = 0;
};

inline TestPathSet generate(Strategy strategy, const SutModel& m, const CoverageSpec& spec,
                            const GenerationOptions& options = {}) {
  if (strategy == Strategy::Fsmt) {
    return generate_fsmt(m, spec, FsmtOptions{options.shuffle_uncovered, options.seed, options.limits});
  }
  return generate_nsr(m, spec, NsrOptions{options.enumeration_cap, options.limits});
}

struct BenchInstance {
  std::string id;
  std::string origin;  // "industrial" or "artificial"
  SutModel model;
  std::optional<DefectSpec> defects;  // injected by the harness when absent and defects are enabled
};

enum class RunStatus { Complete, Infeasible, ResourceLimit };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Complete: return "complete";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::ResourceLimit: return "resource-limit";
  }
  return "unknown";
}

struct BenchRun {
  std::string instance;
  std::string origin;
  Strategy strategy = Strategy::Fsmt;
  CoverageLevel level = CoverageLevel::Level1;
  LengthRange range;
  RunStatus status = RunStatus::Infeasible;
  MetricsReport metrics;
  ActivationReport activation;
  std::int64_t runtime_ms = 0;
  std::string error;
};

struct BenchConfig {
  std::vector<LengthRange> ranges = default_length_ranges();
  std::vector<CoverageLevel> levels{CoverageLevel::Level1, CoverageLevel::Level2};
  std::vector<Strategy> strategies{Strategy::Nsr, Strategy::Fsmt};
  bool defects = true;
  std::uint64_t seed = 0;
  std::chrono::milliseconds timeout{60'000};
  std::size_t max_explored = 10'000'000;
  std::size_t workers = 1;
  bool record_runtime = false;
};

// SplitMix64 step; derives independent per-instance seeds from the master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Runs one (instance, strategy, level, range) combination. A Complete result
/// that fails its coverage checker raises InternalConsistencyError.
inline BenchRun run_single(const BenchInstance& instance, const DefectSpec* defects, Strategy strategy,
                           CoverageLevel level, LengthRange range, const BenchConfig& config) {
  BenchRun run;
  run.instance = instance.id;
  run.origin = instance.origin;
  run.strategy = strategy;
  run.level = level;
  run.range = range;
  const auto spec = CoverageSpec::make(level, range.min_length, range.max_length);

  GenerationOptions options;
  const auto started = std::chrono::steady_clock::now();
  options.limits.max_explored = config.max_explored;
  options.limits.deadline = started + config.timeout;
  try {
    const TestPathSet set = generate(strategy, instance.model, spec, options);
    if (set.status == GenerationStatus::Complete) {
      const auto verdict = check_coverage(set.paths, instance.model, spec);
      if (!verdict.satisfied) {
        throw InternalConsistencyError(std::string(to_string(strategy)) + " produced a set for " + instance.id +
                                       " that violates " + to_string(verdict.violations.front().kind));
      }
      run.status = RunStatus::Complete;
      run.metrics = path_set_metrics(set.paths);
      if (defects) run.activation = activated_defects(set.paths, *defects, run.metrics);
    } else {
      run.status = RunStatus::Infeasible;
    }
  } catch (const ResourceLimitError& ex) {
    run.status = RunStatus::ResourceLimit;
    run.error = ex.what();
  }
  if (config.record_runtime) {
    run.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                         .count();
  }
  return run;
}

/// Every combination of instance x range x level x strategy, in that nesting
/// order. Work may run on several threads; the returned order is fixed.
inline std::vector<BenchRun> run_benchmark(std::span<const BenchInstance> instances, const BenchConfig& config) {
  struct Job {
    std::size_t instance;
    LengthRange range;
    CoverageLevel level;
    Strategy strategy;
  };
  std::vector<DefectSpec> defects(instances.size());
  if (config.defects) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      defects[i] = instances[i].defects ? *instances[i].defects
                                        : inject_default_defects(instances[i].model, derive_seed(config.seed, i));
    }
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto& range : config.ranges) {
      for (auto level : config.levels) {
        for (auto strategy : config.strategies) jobs.push_back({i, range, level, strategy});
      }
    }
  }

  std::vector<BenchRun> runs(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const Job& job = jobs[j];
        runs[j] = run_single(instances[job.instance], config.defects ? &defects[job.instance] : nullptr,
                             job.strategy, job.level, job.range, config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

// ---------------------------------------------------------------------------
// Aggregation: per (origin group, range, level) means over instances where
// both strategies returned a Complete set, plus diff = NSR / FSMT.
// ---------------------------------------------------------------------------

struct MeanMetrics {
  double len = 0;
  double paths = 0;
  double avlen = 0;
  double unique = 0;
  double ut = 0;
  double a_s = 0;
  double a_p = 0;
  double e_s = 0;
  double e_p = 0;
};

struct SummaryRow {
  std::string origin;  // "all" or a specific origin tag
  LengthRange range;
  CoverageLevel level = CoverageLevel::Level1;
  std::size_t instances = 0;
  MeanMetrics nsr;
  MeanMetrics fsmt;
  MeanMetrics diff;  // nsr / fsmt; 0 where fsmt is 0
};

inline std::vector<SummaryRow> summarize(std::span<const BenchRun> runs) {
  using Key = std::tuple<LengthRange, int, std::string>;
  std::map<Key, std::pair<const BenchRun*, const BenchRun*>> paired;  // (nsr, fsmt) per instance
  std::vector<Key> order;
  for (const auto& r : runs) {
    Key key{r.range, to_int(r.level), r.instance};
    auto [it, inserted] = paired.try_emplace(key, nullptr, nullptr);
    if (inserted) order.push_back(key);
    (r.strategy == Strategy::Nsr ? it->second.first : it->second.second) = &r;
  }

  std::map<std::tuple<std::string, LengthRange, int>, SummaryRow> rows;
  auto accumulate = [](MeanMetrics& m, const BenchRun& r) {
    m.len += static_cast<double>(r.metrics.total_steps);
    m.paths += static_cast<double>(r.metrics.path_count);
    m.avlen += to_double(r.metrics.avg_length);
    m.unique += static_cast<double>(r.metrics.unique_edges);
    m.ut += to_double(r.metrics.duplication_ratio);
    m.a_s += static_cast<double>(r.activation.singles_activated);
    m.a_p += static_cast<double>(r.activation.pairs_activated);
    m.e_s += to_double(r.activation.efficiency_single);
    m.e_p += to_double(r.activation.efficiency_pair);
  };
  for (const auto& key : order) {
    const auto [nsr, fsmt] = paired[key];
    if (!nsr || !fsmt || nsr->status != RunStatus::Complete || fsmt->status != RunStatus::Complete) continue;
    for (const std::string& group : {std::string("all"), nsr->origin}) {
      auto& row = rows[{group, nsr->range, to_int(nsr->level)}];
      row.origin = group;
      row.range = nsr->range;
      row.level = nsr->level;
      ++row.instances;
      accumulate(row.nsr, *nsr);
      accumulate(row.fsmt, *fsmt);
    }
  }

  std::vector<SummaryRow> out;
  for (auto& [key, row] : rows) {
    auto finish = [&](MeanMetrics& m) {
      const double n = static_cast<double>(row.instances);
      for (double* f : {&m.len, &m.paths, &m.avlen, &m.unique, &m.ut, &m.a_s, &m.a_p, &m.e_s, &m.e_p}) *f /= n;
    };
    finish(row.nsr);
    finish(row.fsmt);
    auto ratio = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
    row.diff = {ratio(row.nsr.len, row.fsmt.len),     ratio(row.nsr.paths, row.fsmt.paths),
                ratio(row.nsr.avlen, row.fsmt.avlen), ratio(row.nsr.unique, row.fsmt.unique),
                ratio(row.nsr.ut, row.fsmt.ut),       ratio(row.nsr.a_s, row.fsmt.a_s),
                ratio(row.nsr.a_p, row.fsmt.a_p),     ratio(row.nsr.e_s, row.fsmt.e_s),
                ratio(row.nsr.e_p, row.fsmt.e_p)};
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace detail

inline constexpr const char* kRunCsvHeader =
    "instance,origin,strategy,level,min_len,max_len,status,len,paths,avlen,unique,ut,A_S,A_P,E_S,E_P,runtime_ms";

/// avlen and ut are rendered with one decimal, E_S and E_P with three.
inline std::string export_csv(std::span<const BenchRun> runs) {
  std::ostringstream out;
  out << kRunCsvHeader << '\n';
  for (const auto& r : runs) {
    out << detail::csv_field(r.instance) << ',' << detail::csv_field(r.origin) << ',' << to_string(r.strategy) << ','
        << to_int(r.level) << ',' << r.range.min_length << ',' << r.range.max_length << ',' << to_string(r.status)
        << ',' << r.metrics.total_steps << ',' << r.metrics.path_count << ',' << to_decimal(r.metrics.avg_length, 1)
        << ',' << r.metrics.unique_edges << ',' << to_decimal(r.metrics.duplication_ratio, 1) << ','
        << r.activation.singles_activated << ',' << r.activation.pairs_activated << ','
        << to_decimal(r.activation.efficiency_single, 3) << ',' << to_decimal(r.activation.efficiency_pair, 3) << ','
        << r.runtime_ms << '\n';
  }
  return out.str();
}

inline std::string export_summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "origin,min_len,max_len,level,instances,row,len,paths,avlen,unique,ut,A_S,A_P,E_S,E_P\n";
  for (const auto& row : rows) {
    for (const auto& [label, m] : {std::pair<const char*, const MeanMetrics*>{"nsr", &row.nsr},
                                   {"fsmt", &row.fsmt},
                                   {"diff", &row.diff}}) {
      out << detail::csv_field(row.origin) << ',' << row.range.min_length << ',' << row.range.max_length << ','
          << to_int(row.level) << ',' << row.instances << ',' << label << ',' << detail::fixed(m->len, 2) << ','
          << detail::fixed(m->paths, 2) << ',' << detail::fixed(m->avlen, 2) << ',' << detail::fixed(m->unique, 2)
          << ',' << detail::fixed(m->ut, 2) << ',' << detail::fixed(m->a_s, 2) << ',' << detail::fixed(m->a_p, 2)
          << ',' << detail::fixed(m->e_s, 3) << ',' << detail::fixed(m->e_p, 3) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

}  // namespace detail

/// Test starts are green, test ends red, vertices in both yellow; edges of
/// the highlighted path are drawn bold.
inline std::string export_dot(const SutModel& m, const TestPath* highlight = nullptr) {
  std::ostringstream out;
  out << "digraph " << detail::dot_quote(m.name()) << " {\n";
  out << "  node [shape=ellipse];\n";
  for (VertexIndex v = 0; v < m.vertex_count(); ++v) {
    out << "  " << detail::dot_quote(m.vertex_name(v));
    const bool s = m.is_test_start(v);
    const bool e = m.is_test_end(v);
    std::vector<std::string> attrs;
    if (s && e) {
      attrs.push_back("style=filled, fillcolor=yellow");
    } else if (s) {
      attrs.push_back("style=filled, fillcolor=green");
    } else if (e) {
      attrs.push_back("style=filled, fillcolor=red");
    }
    if (v == m.machine_start()) attrs.push_back("shape=doublecircle");
    if (m.is_machine_end(v)) attrs.push_back("peripheries=2");
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
      out << ']';
    }
    out << ";\n";
  }
  for (EdgeIndex i = 0; i < m.edge_count(); ++i) {
    const Edge& e = m.edge(i);
    out << "  " << detail::dot_quote(m.vertex_name(e.source)) << " -> " << detail::dot_quote(m.vertex_name(e.target))
        << " [id=" << detail::dot_quote(e.id) << ", label=" << detail::dot_quote(e.label.empty() ? e.id : e.label);
    if (highlight && highlight->contains(i)) out << ", style=bold, penwidth=3";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fsmt
