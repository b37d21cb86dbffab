// fsmtgen: command-line front end for test path generation, checking,
// instance generation and benchmarking.
//
// Exit codes: 0 success, 1 infeasible / coverage not satisfied, 2 input error,
// 3 resource cap or timeout, 4 internal consistency failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsmt/fsmt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kInfeasible = 1, kInputError = 2, kResourceCap = 3, kInternal = 4 };

struct RangeFlags {
  std::optional<std::size_t> min_length;
  std::optional<std::size_t> max_length;
  std::optional<int> coverage;

  void attach(CLI::App* cmd) {
    cmd->add_option("--min-length", min_length, "Minimum test path length in edges");
    cmd->add_option("--max-length", max_length, "Maximum test path length in edges");
    cmd->add_option("--coverage", coverage, "Coverage level")->check(CLI::IsMember({1, 2}));
  }

  // Flags override values recorded in a path-set document.
  fsmt::CoverageSpec resolve(const std::optional<fsmt::CoverageSpec>& fallback = std::nullopt) const {
    const auto lo = min_length ? min_length : (fallback ? std::optional(fallback->min_length) : std::nullopt);
    const auto hi = max_length ? max_length : (fallback ? std::optional(fallback->max_length) : std::nullopt);
    if (!lo || !hi) throw fsmt::ModelError("--min-length and --max-length are required");
    const auto level = coverage ? fsmt::coverage_level_from_int(*coverage)
                                : (fallback ? fallback->level : fsmt::CoverageLevel::Level1);
    return fsmt::CoverageSpec::make(level, *lo, *hi);
  }
};

fsmt::SutModel load_model(const std::string& path) { return fsmt::parse_model(fsmt::read_file(path)); }

json load_json(const std::string& path) {
  try {
    return json::parse(fsmt::read_file(path));
  } catch (const json::parse_error& e) {
    throw fsmt::ModelError(path + ": " + e.what());
  }
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw fsmt::ModelError("cannot write '" + out + "'");
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fsmt::SearchLimits limits_for(double timeout_s) {
  fsmt::SearchLimits limits;
  if (timeout_s > 0) {
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(timeout_s));
  }
  return limits;
}

json stats_to_json(const fsmt::GraphStats& s) {
  return {{"vertices", s.vertex_count},
          {"edges", s.edge_count},
          {"cycles", s.simple_cycle_count},
          {"cycles_partial", s.cycles_partial},
          {"avg_cycle_length", fsmt::to_decimal(s.avg_cycle_length, 1)},
          {"parallel_edges", s.parallel_edge_count},
          {"parallel_edge_groups", s.parallel_edge_group_count},
          {"avg_out_degree", fsmt::to_decimal(s.avg_out_degree, 1)},
          {"avg_in_degree", fsmt::to_decimal(s.avg_in_degree, 1)},
          {"avg_degree", fsmt::to_decimal(s.avg_degree, 1)},
          {"test_starts", s.test_start_count},
          {"test_ends", s.test_end_count},
          {"start_end_overlap", s.start_end_overlap_count},
          {"machine_ends", s.machine_end_count}};
}

json metrics_to_json(const fsmt::MetricsReport& r) {
  return {{"len", r.total_steps},
          {"paths", r.path_count},
          {"avlen", fsmt::to_decimal(r.avg_length, 1)},
          {"unique", r.unique_edges},
          {"ut", fsmt::to_decimal(r.duplication_ratio, 1)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test path generation for state machines with start/end states and length ranges"};
  app.require_subcommand(1);

  std::string model_path;
  std::string paths_path;
  std::string defects_path;
  std::string out;
  std::uint64_t seed = 0;
  double timeout = 60;
  RangeFlags range;

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a test path set");
  std::string strategy = "fsmt";
  bool shuffle = false;
  std::size_t max_explored = fsmt::SearchLimits{}.max_explored;
  gen->add_option("model", model_path, "Model file")->required();
  range.attach(gen);
  gen->add_option("--strategy", strategy, "fsmt or nsr")->check(CLI::IsMember({"fsmt", "nsr"}));
  gen->add_option("--seed", seed, "Seed for the shuffled uncovered-edge order");
  gen->add_flag("--shuffle", shuffle, "Visit uncovered edges in seeded random order (fsmt, level 2)");
  gen->add_option("--timeout", timeout, "Seconds before giving up (0 = no limit)");
  gen->add_option("--max-explored", max_explored, "Cap on partial paths explored");
  gen->add_option("--out", out, "Output file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "Check a path set against a coverage level");
  check->add_option("model", model_path, "Model file")->required();
  check->add_option("paths", paths_path, "Path-set file")->required();
  range.attach(check);
  check->add_option("--out", out, "Output file (default stdout)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Report test set properties");
  metrics->add_option("model", model_path, "Model file")->required();
  metrics->add_option("paths", paths_path, "Path-set file")->required();
  metrics->add_option("--out", out, "Output file (default stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Report model properties");
  std::size_t cycle_cap = fsmt::kDefaultCycleCap;
  stats->add_option("model", model_path, "Model file")->required();
  stats->add_option("--cycle-cap", cycle_cap, "Stop counting cycles after this many");
  stats->add_option("--out", out, "Output file (default stdout)");

  // modelgen
  auto* mg = app.add_subcommand("modelgen", "Generate models from target properties");
  std::string targets_path;
  std::string profile = "artificial";
  std::size_t count = 0;
  std::string out_dir;
  std::string name = "generated";
  mg->add_option("--targets", targets_path, "Target properties file (single model)");
  mg->add_option("--profile", profile, "Sampling profile for batch mode")
      ->check(CLI::IsMember({"artificial", "industrial"}));
  mg->add_option("--count", count, "Number of models to sample (batch mode)");
  mg->add_option("--out-dir", out_dir, "Directory for batch output");
  mg->add_option("--name", name, "Model name (single model)");
  mg->add_option("--seed", seed, "Seed");
  mg->add_option("--out", out, "Output file (single model, default stdout)");

  // defects
  auto* defects = app.add_subcommand("defects", "Artificial defect placement and scoring");
  defects->require_subcommand(1);
  auto* inject = defects->add_subcommand("inject", "Place SINGLE and PAIR defects");
  std::optional<std::size_t> singles;
  std::optional<std::size_t> pairs;
  bool self_pairs = false;
  inject->add_option("model", model_path, "Model file")->required();
  inject->add_option("--singles", singles, "SINGLE defect count (default scales with |E|)");
  inject->add_option("--pairs", pairs, "PAIR defect count (default scales with |E|)");
  inject->add_flag("--allow-self-pairs", self_pairs, "Allow trigger and manifest on the same edge");
  inject->add_option("--seed", seed, "Seed");
  inject->add_option("--out", out, "Output file (default stdout)");
  auto* score = defects->add_subcommand("score", "Count defects activated by a path set");
  score->add_option("model", model_path, "Model file")->required();
  score->add_option("paths", paths_path, "Path-set file")->required();
  score->add_option("defects", defects_path, "Defect file")->required();
  score->add_option("--out", out, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run both strategies over a manifest");
  std::string manifest_path;
  std::string summary_path;
  std::size_t workers = 1;
  bool record_runtime = false;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("manifest", manifest_path, "Manifest file")->required();
  bench->add_option("--seed", bench_seed, "Override the manifest seed");
  bench->add_option("--timeout", timeout, "Per-run time limit in seconds");
  bench->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  bench->add_option("--summary", summary_path, "Also write per-range means and diffs");
  bench->add_flag("--record-runtime", record_runtime, "Fill the runtime_ms column (output is then not reproducible)");
  bench->add_option("--out", out, "Output CSV (default stdout)");

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "Render a model as Graphviz DOT");
  std::optional<std::size_t> path_index;
  dot->add_option("model", model_path, "Model file")->required();
  dot->add_option("--paths", paths_path, "Path-set file for highlighting");
  dot->add_option("--path-index", path_index, "Highlight this path (default 0 when --paths is given)");
  dot->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) {
      const auto m = load_model(model_path);
      const auto spec = range.resolve();
      fsmt::GenerationOptions opts;
      opts.limits = limits_for(timeout);
      opts.limits.max_explored = max_explored;
      opts.shuffle_uncovered = shuffle;
      opts.seed = seed;
      const auto s = fsmt::strategy_from_string(strategy);
      const auto set = fsmt::generate(s, m, spec, opts);
      emit(out, dump(fsmt::path_set_to_json(m, {m.name(), strategy, spec, set})));
      return set.status == fsmt::GenerationStatus::Complete ? kOk : kInfeasible;
    }
    if (*check) {
      const auto m = load_model(model_path);
      const auto doc = fsmt::path_set_from_json(m, load_json(paths_path));
      const auto spec = range.resolve(doc.spec);
      const auto verdict = fsmt::check_coverage(doc.set.paths, m, spec);
      emit(out, dump(fsmt::verdict_to_json(m, verdict)));
      return verdict.satisfied ? kOk : kInfeasible;
    }
    if (*metrics) {
      const auto m = load_model(model_path);
      const auto doc = fsmt::path_set_from_json(m, load_json(paths_path));
      emit(out, dump(metrics_to_json(fsmt::path_set_metrics(doc.set.paths))));
      return kOk;
    }
    if (*stats) {
      emit(out, dump(stats_to_json(fsmt::graph_stats(load_model(model_path), cycle_cap))));
      return kOk;
    }
    if (*mg) {
      if (!targets_path.empty()) {
        const auto targets = fsmt::targets_from_json(load_json(targets_path));
        emit(out, fsmt::serialize_model(fsmt::generate_instance(targets, seed, {1000, name})));
        return kOk;
      }
      if (count == 0 || out_dir.empty()) {
        throw fsmt::ModelError("modelgen needs --targets, or --count with --out-dir");
      }
      const auto prof =
          profile == "artificial" ? fsmt::InstanceProfile::Artificial : fsmt::InstanceProfile::Industrial;
      fs::create_directories(out_dir);
      json manifest{{"seed", seed}, {"instances", json::array()}};
      for (std::size_t i = 0; i < count; ++i) {
        const auto instance_seed = fsmt::derive_seed(seed, i);
        std::mt19937_64 rng(instance_seed);
        const auto targets = fsmt::sample_targets(prof, rng);
        const std::string id = profile + "-" + std::to_string(i + 1);
        const auto model = fsmt::generate_instance(targets, instance_seed, {1000, id});
        emit((fs::path(out_dir) / (id + ".fsm")).string(), fsmt::serialize_model(model));
        manifest["instances"].push_back({{"id", id},
                                         {"origin", profile},
                                         {"model", id + ".fsm"},
                                         {"seed", instance_seed},
                                         {"targets", fsmt::targets_to_json(targets)}});
      }
      emit((fs::path(out_dir) / "manifest.json").string(), dump(manifest));
      return kOk;
    }
    if (*inject) {
      const auto m = load_model(model_path);
      fsmt::DefectSpec d;
      if (singles || pairs) {
        const auto defaults = fsmt::default_defect_counts(m);
        d = fsmt::inject_defects(m, singles.value_or(defaults.singles), pairs.value_or(defaults.pairs), seed,
                                 {self_pairs});
      } else {
        d = fsmt::inject_default_defects(m, seed);
      }
      emit(out, dump(fsmt::defects_to_json(m, d)));
      return kOk;
    }
    if (*score) {
      const auto m = load_model(model_path);
      const auto doc = fsmt::path_set_from_json(m, load_json(paths_path));
      const auto d = fsmt::defects_from_json(m, load_json(defects_path));
      const auto report = fsmt::path_set_metrics(doc.set.paths);
      emit(out, dump(fsmt::activation_to_json(fsmt::activated_defects(doc.set.paths, d, report))));
      return kOk;
    }
    if (*bench) {
      auto plan = fsmt::load_manifest(load_json(manifest_path), fs::path(manifest_path).parent_path());
      if (bench_seed) plan.config.seed = *bench_seed;
      plan.config.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout * 1000));
      plan.config.workers = workers;
      plan.config.record_runtime = record_runtime;
      const auto runs = fsmt::run_benchmark(plan.instances, plan.config);
      emit(out, fsmt::export_csv(runs));
      if (!summary_path.empty()) emit(summary_path, fsmt::export_summary_csv(fsmt::summarize(runs)));
      return kOk;
    }
    if (*dot) {
      const auto m = load_model(model_path);
      if (paths_path.empty()) {
        emit(out, fsmt::export_dot(m));
        return kOk;
      }
      const auto doc = fsmt::path_set_from_json(m, load_json(paths_path));
      const std::size_t idx = path_index.value_or(0);
      if (idx >= doc.set.paths.size()) throw fsmt::ModelError("path index out of range");
      emit(out, fsmt::export_dot(m, &doc.set.paths[idx]));
      return kOk;
    }
  } catch (const fsmt::ResourceLimitError& e) {
    std::cerr << "fsmtgen: " << e.what() << '\n';
    return kResourceCap;
  } catch (const fsmt::InternalConsistencyError& e) {
    std::cerr << "fsmtgen: internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const fsmt::ParseError& e) {
    std::cerr << "fsmtgen: " << e.what() << '\n';
    return kInputError;
  } catch (const fsmt::Error& e) {
    std::cerr << "fsmtgen: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "fsmtgen: malformed input: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "fsmtgen: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
