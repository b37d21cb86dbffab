#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fsmt/coverage.hpp"
#include "fsmt/fsmt_strategy.hpp"
#include "oracle.hpp"

using namespace fsmt;
using fixtures::l1;
using fixtures::l2;
using fixtures::path;

TEST(GenerateFsmt, SingleEdge) {
  const auto m = fixtures::single();
  const auto set = generate_fsmt(m, l1(1, 1));
  ASSERT_EQ(set.paths.size(), 1u);
  EXPECT_EQ(set.paths[0], path({1}));
  EXPECT_TRUE(set.uncovered_edges.empty());
  EXPECT_EQ(set.status, GenerationStatus::Complete);
}

TEST(GenerateFsmt, ParallelEdgesLevel2) {
  const auto m = fixtures::parallel();
  const auto set = generate_fsmt(m, l2(2, 2));
  EXPECT_EQ(set.paths, (std::vector<TestPath>{path({1, 3}), path({2, 3})}));
  EXPECT_TRUE(set.uncovered_edges.empty());
  EXPECT_EQ(set.status, GenerationStatus::Complete);
}

TEST(GenerateFsmt, DiamondOutOfRangeIsInfeasible) {
  const auto m = fixtures::diamond();
  const auto set = generate_fsmt(m, l1(3, 3));
  EXPECT_TRUE(set.paths.empty());
  EXPECT_EQ(set.infeasible_starts, std::vector<VertexIndex>{0});
  EXPECT_EQ(set.status, GenerationStatus::Infeasible);
}

TEST(GenerateFsmt, UncoverableEdgeDoesNotBlockCompletion) {
  // e3 leads into a dead end, so no test path can contain it.
  const auto m = fixtures::make("M", {"A", "B", "X"}, {{"e1", "A", "B", ""}, {"e2", "B", "A", ""}, {"e3", "A", "X", ""}},
                                {"A"}, {"B"});
  const auto set = generate_fsmt(m, l2(1, 3));
  EXPECT_EQ(set.uncoverable_edges, std::vector<EdgeIndex>{2});
  EXPECT_EQ(set.status, GenerationStatus::Complete);
  EXPECT_TRUE(check_level2(set.paths, m, l2(1, 3)).satisfied);
}

TEST(GenerateFsmt, ShuffledOrderIsSeedDeterministic) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto m = oracle::random_model(rng, 8, 12);
    FsmtOptions opts;
    opts.shuffle_uncovered = true;
    opts.seed = 99;
    EXPECT_EQ(generate_fsmt(m, l2(1, 5), opts), generate_fsmt(m, l2(1, 5), opts));
  }
}

TEST(ShortestPathInRange, Examples) {
  EdgeSet none(0);
  EXPECT_EQ(find_shortest_path_in_range(fixtures::single(), l1(1, 1), EdgeSet(1), 0), path({1}));
  EXPECT_EQ(find_shortest_path_in_range(fixtures::loop(), l1(4, 4), EdgeSet(3), 0), path({1, 2, 1, 3}));
  EXPECT_FALSE(find_shortest_path_in_range(fixtures::single(), l1(2, 2), EdgeSet(1), 0));
}

TEST(ShortestPathInRange, ExplorationCapRaises) {
  const auto m = fixtures::loop();
  SearchBudget budget(SearchLimits{3, std::nullopt});
  EXPECT_THROW(find_shortest_path_in_range(m, l1(7, 7), EdgeSet(3), 0, budget), ResourceLimitError);
}

TEST(RemoveParallelEdges, Examples) {
  const auto m = fixtures::parallel();
  const std::vector<EdgeIndex> only_e3{2};
  const std::vector<EdgeIndex> both{0, 1};
  EXPECT_EQ(remove_parallel_edges(only_e3, m, EdgeSet(3), CoverageLevel::Level1), only_e3);
  EXPECT_EQ(remove_parallel_edges(both, m, EdgeSet(3), CoverageLevel::Level1), std::vector<EdgeIndex>{0});
  EdgeSet uncovered(3);
  uncovered.insert(1);
  EXPECT_EQ(remove_parallel_edges(both, m, uncovered, CoverageLevel::Level2), std::vector<EdgeIndex>{1});
  uncovered.insert(0);
  EXPECT_EQ(remove_parallel_edges(both, m, uncovered, CoverageLevel::Level2), std::vector<EdgeIndex>{0});
}

TEST(PivotSearch, Examples) {
  const auto chain = fixtures::chain();
  EXPECT_EQ(find_shortest_path_in_range_for_edge(1, chain, l2(3, 3), EdgeSet(3)), path({1, 2, 3}));
  EXPECT_FALSE(find_shortest_path_in_range_for_edge(1, chain, l2(4, 8), EdgeSet(3)));
  EXPECT_EQ(find_shortest_path_in_range_for_edge(0, fixtures::single(), l2(1, 1), EdgeSet(1)), path({1}));
}

TEST(PivotSearch, ResultContainsPivotAndIsValid) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto m = oracle::random_model(rng, 8, 12);
    const auto spec = l2(2, 6);
    for (EdgeIndex e = 0; e < m.edge_count(); ++e) {
      if (auto p = find_shortest_path_in_range_for_edge(e, m, spec, EdgeSet(m.edge_count()))) {
        EXPECT_TRUE(p->contains(e));
        EXPECT_TRUE(p->is_chained(m));
        EXPECT_TRUE(spec.in_range(p->length()));
        EXPECT_TRUE(m.is_test_start(p->first_vertex(m)));
        EXPECT_TRUE(m.is_test_end(p->last_vertex(m)));
      }
    }
  }
}

TEST(DirectedSearchStep, BackwardStepExtendsTowardStart) {
  const auto m = fixtures::loop();
  auto state = SemiPathMaps::seeded(2);
  SearchBudget budget;
  EXPECT_FALSE(directed_search_step(state, Direction::Backward, m, l2(2, 4), EdgeSet(3), budget));
  ASSERT_EQ(state.backward.queue.size(), 1u);
  EXPECT_EQ(state.backward.queue.front(), path({1, 3}));
  EXPECT_TRUE(state.backward.stored.empty());
  EXPECT_EQ(state.backward.min_depth, 2u);
}

TEST(DirectedSearchStep, ForwardAtDestinationIsStored) {
  const auto m = fixtures::loop();
  auto state = SemiPathMaps::seeded(2);
  SearchBudget budget;
  EXPECT_FALSE(directed_search_step(state, Direction::Forward, m, l2(1, 4), EdgeSet(3), budget));
  ASSERT_EQ(state.forward.stored.count(1), 1u);
  EXPECT_EQ(state.forward.stored.at(1), path({3}));
}

TEST(DirectedSearchStep, OverlongSemiPathIsDropped) {
  const auto m = fixtures::loop();
  SemiPathMaps state;
  state.pivot = 0;
  state.forward.queue.push_back(path({1, 2, 1}));
  SearchBudget budget;
  EXPECT_FALSE(directed_search_step(state, Direction::Forward, m, l2(1, 2), EdgeSet(3), budget));
  EXPECT_TRUE(state.forward.queue.empty());
  EXPECT_TRUE(state.forward.stored.empty());
}

TEST(EvaluateCandidate, JoinsComplementaryLengths) {
  std::map<std::size_t, TestPath> own;
  std::map<std::size_t, TestPath> other{{3, path({2, 1, 3})}};
  const auto full = evaluate_candidate(path({1, 2}), own, other, Direction::Backward, 3, l2(2, 4), EdgeSet(3));
  ASSERT_TRUE(full);
  EXPECT_EQ(*full, path({1, 2, 1, 3}));
  EXPECT_TRUE(full->is_chained(fixtures::loop()));
}

TEST(EvaluateCandidate, EmptyOtherMapStores) {
  std::map<std::size_t, TestPath> own;
  std::map<std::size_t, TestPath> other;
  EXPECT_FALSE(evaluate_candidate(path({1, 2}), own, other, Direction::Backward, 1, l2(2, 4), EdgeSet(3)));
  ASSERT_EQ(own.count(2), 1u);
  EXPECT_EQ(own.at(2), path({1, 2}));
}

TEST(EvaluateCandidate, Level2PrefersMoreUncoveredEdges) {
  EdgeSet uncovered(4);
  uncovered.insert(2);
  uncovered.insert(3);
  std::map<std::size_t, TestPath> own{{2, path({1, 2})}};
  std::map<std::size_t, TestPath> other;
  EXPECT_FALSE(evaluate_candidate(path({3, 2}), own, other, Direction::Backward, 1, l2(1, 4), uncovered));
  EXPECT_EQ(own.at(2), path({3, 2}));
  // Level 1 keeps the first.
  std::map<std::size_t, TestPath> own1{{2, path({1, 2})}};
  EXPECT_FALSE(evaluate_candidate(path({3, 2}), own1, other, Direction::Backward, 1, l1(1, 4), uncovered));
  EXPECT_EQ(own1.at(2), path({1, 2}));
}

TEST(PrepareNextMoves, Examples) {
  const auto d = fixtures::diamond();
  std::deque<TestPath> queue;
  std::size_t counter = 0;
  prepare_next_moves(queue, path({1}), 1, counter, Direction::Forward, d, EdgeSet(4), CoverageLevel::Level1);
  ASSERT_EQ(queue.size(), 1u);
  EXPECT_EQ(queue.front(), path({1, 3}));
  EXPECT_EQ(counter, 1u);

  queue.clear();
  counter = 0;
  prepare_next_moves(queue, path({3}), 1, counter, Direction::Backward, d, EdgeSet(4), CoverageLevel::Level1);
  ASSERT_EQ(queue.size(), 1u);
  EXPECT_EQ(queue.front(), path({1, 3}));
  EXPECT_EQ(counter, 1u);

  queue.clear();
  counter = 0;
  prepare_next_moves(queue, TestPath{}, 0, counter, Direction::Forward, fixtures::parallel(), EdgeSet(3),
                     CoverageLevel::Level1);
  ASSERT_EQ(queue.size(), 1u);
  EXPECT_EQ(queue.front(), path({1}));
}

TEST(GenerateFsmtProperty, OutputInvariants) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto m = oracle::random_model(rng, 10, 14);
    for (auto level : {CoverageLevel::Level1, CoverageLevel::Level2}) {
      const auto spec = CoverageSpec::make(level, 1 + i % 3, 3 + i % 5);
      const auto set = generate_fsmt(m, spec);
      std::vector<int> starts(m.vertex_count(), 0);
      for (const auto& p : set.paths) {
        ASSERT_TRUE(p.is_chained(m));
        EXPECT_TRUE(spec.in_range(p.length()));
        EXPECT_TRUE(m.is_test_start(p.first_vertex(m)));
        EXPECT_TRUE(m.is_test_end(p.last_vertex(m)));
        if (level == CoverageLevel::Level1) ++starts[p.first_vertex(m)];
      }
      if (level == CoverageLevel::Level1) {
        EXPECT_LE(set.paths.size(), m.test_starts().size());
        for (VertexIndex v : m.test_starts()) {
          const bool infeasible =
              std::find(set.infeasible_starts.begin(), set.infeasible_starts.end(), v) != set.infeasible_starts.end();
          EXPECT_EQ(starts[v] + (infeasible ? 1 : 0), 1);
        }
      }
      if (set.status == GenerationStatus::Complete) {
        EXPECT_TRUE(check_coverage(set.paths, m, spec).satisfied);
      }
      EXPECT_EQ(set, generate_fsmt(m, spec));
    }
  }
}
