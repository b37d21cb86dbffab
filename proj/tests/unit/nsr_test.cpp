#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fsmt/coverage.hpp"
#include "fsmt/nsr_strategy.hpp"
#include "oracle.hpp"

using namespace fsmt;
using fixtures::l1;
using fixtures::l2;
using fixtures::path;

namespace {

std::set<std::vector<EdgeIndex>> as_set(const std::vector<TestPath>& paths) {
  std::set<std::vector<EdgeIndex>> out;
  for (const auto& p : paths) out.insert(p.edges);
  return out;
}

}  // namespace

TEST(GenerateNsr, Examples) {
  const auto single = generate_nsr(fixtures::single(), l1(1, 1));
  EXPECT_EQ(single.paths, std::vector<TestPath>{path({1})});
  EXPECT_EQ(single.status, GenerationStatus::Complete);

  const auto par = generate_nsr(fixtures::parallel(), l2(2, 2));
  EXPECT_EQ(par.paths, (std::vector<TestPath>{path({1, 3}), path({2, 3})}));

  const auto diamond = generate_nsr(fixtures::diamond(), l1(2, 2));
  EXPECT_EQ(diamond.paths, std::vector<TestPath>{path({1, 3})});
}

TEST(GenerateNsr, EnumerationCapRaises) {
  NsrOptions opts;
  opts.enumeration_cap = 4;
  EXPECT_THROW(generate_nsr(fixtures::loop(), l1(1, 6), opts), ResourceLimitError);
}

TEST(EnumeratePaths, Examples) {
  EXPECT_EQ(enumerate_paths_in_range(fixtures::single(), l1(1, 1)), std::vector<TestPath>{path({1})});
  const auto loop = enumerate_paths_in_range(fixtures::loop(), l1(1, 2));
  EXPECT_EQ(loop.size(), 6u);
  EXPECT_EQ(as_set(loop), as_set({path({1}), path({2}), path({3}), path({1, 2}), path({1, 3}), path({2, 1})}));
  EXPECT_TRUE(enumerate_paths_in_range(fixtures::chain(), l1(4, 4)).empty());
}

TEST(EnumeratePaths, PreorderByFirstEdge) {
  const auto loop = enumerate_paths_in_range(fixtures::loop(), l1(1, 2));
  EXPECT_EQ(loop, (std::vector<TestPath>{path({1}), path({1, 2}), path({1, 3}), path({2}), path({2, 1}), path({3})}));
}

TEST(FilterTestPaths, Examples) {
  const auto m = fixtures::loop();
  const auto all = enumerate_paths_in_range(m, l1(1, 2));
  std::vector<TestPath> len2;
  for (const auto& p : all) {
    if (p.length() == 2) len2.push_back(p);
  }
  EXPECT_EQ(filter_test_paths(len2, m), std::vector<TestPath>{path({1, 3})});
  EXPECT_TRUE(filter_test_paths({}, m).empty());
  EXPECT_TRUE(filter_test_paths(std::vector<TestPath>{path({1, 2})}, m).empty());
}

TEST(ReduceTestPaths, Examples) {
  const auto d = fixtures::diamond();
  EXPECT_EQ(reduce_test_paths(std::vector<TestPath>{path({1, 3}), path({2, 4})}, d, CoverageLevel::Level1),
            std::vector<TestPath>{path({1, 3})});
  const auto par = fixtures::parallel();
  EXPECT_EQ(reduce_test_paths(std::vector<TestPath>{path({1, 3}), path({2, 3})}, par, CoverageLevel::Level2),
            (std::vector<TestPath>{path({1, 3}), path({2, 3})}));
  EXPECT_EQ(reduce_test_paths(std::vector<TestPath>{path({1, 3}), path({1, 3})}, par, CoverageLevel::Level2),
            std::vector<TestPath>{path({1, 3})});
}

TEST(ReduceTestPathsProperty, SubsetStartsAndEdgeUnion) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto m = oracle::random_model(rng, 10, 14);
    const auto valid = filter_test_paths(enumerate_paths_in_range(m, l1(1, 5)), m);
    for (auto level : {CoverageLevel::Level1, CoverageLevel::Level2}) {
      const auto kept = reduce_test_paths(valid, m, level);
      const auto input = as_set(valid);
      std::set<VertexIndex> in_starts;
      std::set<VertexIndex> out_starts;
      for (const auto& p : valid) in_starts.insert(p.first_vertex(m));
      for (const auto& p : kept) {
        EXPECT_TRUE(input.count(p.edges));
        out_starts.insert(p.first_vertex(m));
      }
      EXPECT_EQ(in_starts, out_starts);
      if (level == CoverageLevel::Level1) {
        EXPECT_EQ(kept.size(), out_starts.size());
      } else {
        EXPECT_EQ(edge_union(kept, m.edge_count()).to_vector(), edge_union(valid, m.edge_count()).to_vector());
      }
    }
  }
}

TEST(GenerateNsrProperty, CompleteOutputsPassChecker) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i) {
    const auto m = oracle::random_model(rng, 10, 14);
    for (auto level : {CoverageLevel::Level1, CoverageLevel::Level2}) {
      const auto spec = CoverageSpec::make(level, 1 + i % 3, 3 + i % 4);
      const auto set = generate_nsr(m, spec);
      if (set.status == GenerationStatus::Complete) {
        EXPECT_TRUE(check_coverage(set.paths, m, spec).satisfied);
      }
    }
  }
}
