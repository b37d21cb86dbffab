#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fsmt/metrics.hpp"

using namespace fsmt;
using fixtures::path;

TEST(PathSetMetrics, Examples) {
  const auto r = path_set_metrics(std::vector<TestPath>{path({1, 2}), path({1, 3, 4, 2})});
  EXPECT_EQ(r.total_steps, 6u);
  EXPECT_EQ(r.path_count, 2u);
  EXPECT_EQ(r.avg_length, Ratio(3));
  EXPECT_EQ(r.unique_edges, 4u);
  EXPECT_EQ(r.duplication_ratio, Ratio(3, 2));

  EXPECT_EQ(path_set_metrics(std::vector<TestPath>{}), MetricsReport{});

  const auto one = path_set_metrics(std::vector<TestPath>{path({1})});
  EXPECT_EQ(one.total_steps, 1u);
  EXPECT_EQ(one.avg_length, Ratio(1));
  EXPECT_EQ(one.duplication_ratio, Ratio(1));
}

TEST(ToDecimal, RoundsHalfUp) {
  EXPECT_EQ(to_decimal(Ratio(3, 2), 1), "1.5");
  EXPECT_EQ(to_decimal(Ratio(1, 4), 1), "0.3");
  EXPECT_EQ(to_decimal(Ratio(1, 3), 3), "0.333");
  EXPECT_EQ(to_decimal(Ratio(2, 3), 1), "0.7");
  EXPECT_EQ(to_decimal(Ratio(7), 1), "7.0");
  EXPECT_EQ(to_decimal(Ratio(1, 40), 3), "0.025");
}

TEST(PathSetMetricsProperty, Identities) {
  std::mt19937_64 rng(43);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  for (int i = 0; i < 1000; ++i) {
    std::vector<TestPath> paths(pick(0, 6));
    std::size_t sum = 0;
    bool repeats = false;
    std::vector<int> seen(20, 0);
    for (auto& p : paths) {
      p.edges.resize(pick(1, 8));
      for (auto& e : p.edges) {
        e = pick(0, 19);
        if (seen[e]++) repeats = true;
      }
      sum += p.length();
    }
    const auto r = path_set_metrics(paths);
    const auto len = static_cast<std::int64_t>(r.total_steps);
    EXPECT_EQ(r.total_steps, sum);
    EXPECT_EQ(r.avg_length * static_cast<std::int64_t>(r.path_count), Ratio(len));
    EXPECT_EQ(r.duplication_ratio * static_cast<std::int64_t>(r.unique_edges), Ratio(len));
    EXPECT_LE(r.unique_edges, r.total_steps);
    if (!paths.empty()) {
      EXPECT_GE(r.duplication_ratio, Ratio(1));
      EXPECT_EQ(r.duplication_ratio == Ratio(1), !repeats);
    }
    auto shuffled = paths;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(path_set_metrics(shuffled), r);
  }
}
