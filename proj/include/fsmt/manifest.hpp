#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsmt/bench.hpp"
#include "fsmt/error.hpp"
#include "fsmt/model.hpp"
#include "fsmt/modelgen.hpp"

namespace fsmt {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct BenchPlan {
  std::vector<BenchInstance> instances;
  BenchConfig config;
};

// Benchmark manifest (JSON):
//
//   {
//     "seed": 7,
//     "ranges": [[2, 4], [2, 6]],          optional, defaults to the four experiment ranges
//     "levels": [1, 2],                    optional
//     "strategies": ["nsr", "fsmt"],       optional
//     "defects": true,                     optional
//     "instances": [{"id": "door", "origin": "industrial", "model": "door.fsm",
//                    "defects": "door.defects.json"}],
//     "generate": [{"profile": "artificial", "count": 147}]
//   }
//
// Relative paths resolve against `base_dir`. Generated instances take their
// targets and seeds from the master seed.
inline BenchPlan load_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    BenchPlan plan;
    auto& cfg = plan.config;
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("ranges")) {
      cfg.ranges.clear();
      for (const auto& r : j.at("ranges")) {
        LengthRange range{r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()};
        CoverageSpec::make(CoverageLevel::Level1, range.min_length, range.max_length);
        cfg.ranges.push_back(range);
      }
    }
    if (j.contains("levels")) {
      cfg.levels.clear();
      for (const auto& l : j.at("levels")) cfg.levels.push_back(coverage_level_from_int(l.get<int>()));
    }
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& s : j.at("strategies")) cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
    cfg.defects = j.value("defects", true);

    for (const auto& entry : j.value("instances", nlohmann::json::array())) {
      const auto file = base_dir / entry.at("model").get<std::string>();
      SutModel model = parse_model(read_file(file));
      BenchInstance inst{entry.value("id", model.name()), entry.value("origin", std::string("industrial")),
                         std::move(model), std::nullopt};
      if (entry.contains("defects")) {
        const auto text = read_file(base_dir / entry.at("defects").get<std::string>());
        inst.defects = defects_from_json(inst.model, nlohmann::json::parse(text));
      }
      plan.instances.push_back(std::move(inst));
    }

    std::uint64_t generated = 0;
    for (const auto& gen : j.value("generate", nlohmann::json::array())) {
      const auto profile_name = gen.value("profile", std::string("artificial"));
      InstanceProfile profile;
      if (profile_name == "artificial") {
        profile = InstanceProfile::Artificial;
      } else if (profile_name == "industrial") {
        profile = InstanceProfile::Industrial;
      } else {
        throw ModelError("unknown profile '" + profile_name + "'");
      }
      const auto count = gen.at("count").get<std::size_t>();
      for (std::size_t i = 0; i < count; ++i, ++generated) {
        const std::uint64_t seed = derive_seed(cfg.seed ^ 0x6d6f64656c67656eULL, generated);
        std::mt19937_64 rng(seed);
        const auto targets = sample_targets(profile, rng);
        const std::string id = std::string(to_string(profile)) + "-" + std::to_string(generated + 1);
        plan.instances.push_back({id, to_string(profile), generate_instance(targets, seed, {1000, id}), std::nullopt});
      }
    }
    return plan;
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("malformed manifest: ") + ex.what());
  }
}

}  // namespace fsmt
