// Greedy inflate-and-reroute selection plus randomized subgraph packing.

#include <gtest/gtest.h>

#include <random>

#include "pathtree/metrics.hpp"
#include "pathtree/spain.hpp"
#include "pathtree/topology.hpp"
#include "test_util.hpp"

using namespace pathtree;
using pathtree::test::random_connected_network;
using pathtree::test::random_simple_path;

namespace {

bool subgraph_is_forest(const Network& net, const SpainSubgraph& g) {
  EpochDsu dsu(net.node_count());
  dsu.begin();
  for (int e : g.edge_list)
    if (!dsu.unite(net.edge(e).u, net.edge(e).v)) return false;
  return true;
}

}  // namespace

TEST(SpainSelect, RecoversDisjointFabricPathsThenStops) {
  // On symmetric fabrics the inflation step steers each round onto a fresh
  // disjoint route, so asking for more than the fabric offers returns exactly
  // the natural set and then halts on the first rediscovery.
  for (const char* name : {"mesh:5", "ring:7", "clos:4"}) {
    RegularSpec spec = *parse_regular_spec(name);
    Network net = generate(spec);
    int x = net.edge_nodes()[0];
    int y = net.edge_nodes()[1];
    PathSet got = spain_select(net, x, y, natural_k(spec) + 5);
    PathSet want = best_paths(spec, net, x, y);
    EXPECT_EQ(got.paths, want.paths) << name;
    EXPECT_EQ(disjointness_degree(net, got.paths), natural_k(spec)) << name;
  }
}

TEST(SpainSelect, HierCrossGroupDiscoveryOrder) {
  Network net = generate(*parse_regular_spec("hier:2"));
  std::vector<Path> seq = spain_select_sequence(net, 0, 7, 8);
  std::vector<Path> want{Path{{0, 8, 12, 10, 7}}, Path{{0, 9, 12, 11, 7}},
                         Path{{0, 8, 13, 10, 7}}, Path{{0, 9, 13, 11, 7}}};
  EXPECT_EQ(seq, want);  // then the fifth round rediscovers a used route
}

TEST(SpainSelect, HierSameGroupStopsAtTwo) {
  // Both leaf uplinks are consumed after two rounds, so every remaining
  // route reuses an inflated edge and the cheapest rediscovery ends the run.
  Network net = generate(*parse_regular_spec("hier:2"));
  std::vector<Path> seq = spain_select_sequence(net, 0, 1, 8);
  std::vector<Path> want{Path{{0, 8, 1}}, Path{{0, 9, 1}}};
  EXPECT_EQ(seq, want);
}

TEST(SpainSelect, Validation) {
  Network net = generate(*parse_regular_spec("ring:6"));
  EXPECT_THROW(spain_select(net, 0, 1, 0), ValidationError);
  EXPECT_THROW(spain_select(net, 0, 6, 2), ValidationError);
  EXPECT_THROW(spain_select(net, 0, 0, 2), ValidationError);
}

TEST(SpainAggregateOnce, SubgraphsAreForestsAndCoverEveryPath) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Network net = random_connected_network(rng, 5, 10, 6, 18);
    std::vector<Path> paths;
    int count = 1 + trial % 10;
    for (int i = 0; i < count; ++i) paths.push_back(random_simple_path(rng, net));
    SpainRun run = spain_aggregate_once(net, paths, 1000 + trial);
    std::vector<Bits> masks = path_edge_masks(net, paths);
    for (const SpainSubgraph& g : run.subgraphs)
      EXPECT_TRUE(subgraph_is_forest(net, g)) << "trial " << trial;
    for (int i = 0; i < count; ++i) {
      bool covered = false;
      for (const SpainSubgraph& g : run.subgraphs)
        covered = covered || g.edge_mask.contains(masks[i]);
      EXPECT_TRUE(covered) << "trial " << trial << " path " << i;
    }
  }
}

TEST(SpainAggregateOnce, SeedDeterminesOutcome) {
  std::mt19937_64 rng(8);
  Network net = random_connected_network(rng, 8, 8, 12, 16);
  std::vector<Path> paths;
  for (int i = 0; i < 10; ++i) paths.push_back(random_simple_path(rng, net));
  SpainRun a = spain_aggregate_once(net, paths, 99);
  SpainRun b = spain_aggregate_once(net, paths, 99);
  ASSERT_EQ(a.subgraphs.size(), b.subgraphs.size());
  for (std::size_t i = 0; i < a.subgraphs.size(); ++i)
    EXPECT_EQ(a.subgraphs[i].edge_list, b.subgraphs[i].edge_list);
}

TEST(SpainAggregateOnce, RejectsNonSimplePaths) {
  Network net = generate(*parse_regular_spec("ring:6"));
  EXPECT_THROW(spain_aggregate_once(net, {Path{{0, 2}}}, 1), ValidationError);
}

TEST(SpainAggregateBest, IterationBudgetIsExactAndJobIndependent) {
  RegularSpec spec = *parse_regular_spec("ring:6");
  Network net = generate(spec);
  std::vector<Path> pool;
  for (std::size_t i = 0; i < net.edge_nodes().size(); ++i)
    for (std::size_t j = i + 1; j < net.edge_nodes().size(); ++j) {
      PathSet ps = best_paths(spec, net, net.edge_nodes()[i], net.edge_nodes()[j]);
      pool.insert(pool.end(), ps.paths.begin(), ps.paths.end());
    }
  SpainBudget budget;
  budget.iterations = 37;
  SpainRun serial = spain_aggregate_best(net, pool, budget, 5, 1);
  SpainRun parallel = spain_aggregate_best(net, pool, budget, 5, 4);
  EXPECT_EQ(serial.iterations_executed, 37);
  EXPECT_EQ(parallel.iterations_executed, 37);
  EXPECT_EQ(serial.best_size, parallel.best_size);
  EXPECT_EQ(serial.best_iteration, parallel.best_iteration);
  ASSERT_EQ(serial.subgraphs.size(), parallel.subgraphs.size());
  for (std::size_t i = 0; i < serial.subgraphs.size(); ++i)
    EXPECT_EQ(serial.subgraphs[i].edge_list, parallel.subgraphs[i].edge_list);
  // the winner reproduces from its recorded seed alone
  SpainRun replay = spain_aggregate_once(net, pool, serial.seed);
  EXPECT_EQ(replay.best_size, serial.best_size);
}

TEST(SpainAggregateBest, CpuBudgetRunsAtLeastOnce) {
  Network net = generate(*parse_regular_spec("ring:6"));
  std::vector<Path> paths{Path{{0, 1, 2}}, Path{{3, 4, 5}}};
  SpainBudget budget;
  budget.seconds = 0.02;
  SpainRun run = spain_aggregate_best(net, paths, budget, 1, 2);
  EXPECT_GE(run.iterations_executed, 1);
  EXPECT_GE(run.best_size, 1);
}

TEST(SpainAggregateBest, RequiresABudget) {
  Network net = generate(*parse_regular_spec("ring:6"));
  EXPECT_THROW(spain_aggregate_best(net, {Path{{0, 1}}}, SpainBudget{}, 1),
               ValidationError);
}

TEST(SpainAllPairs, RingReportShape) {
  Network net = generate(*parse_regular_spec("ring:6"));
  SelectionReport rep = spain_select_all_pairs(net, 2);
  ASSERT_EQ(rep.results.size(), 15u);
  EXPECT_EQ(rep.total_paths, 30);
  EXPECT_EQ(rep.pairs_below_k, 0);
  EXPECT_DOUBLE_EQ(rep.pct_disjointness_2, 100.0);
  for (std::size_t i = 1; i < rep.results.size(); ++i) {
    auto key = [](const SelectionResult& r) {
      return std::pair<int, int>(r.origin, r.destination);
    };
    EXPECT_LT(key(rep.results[i - 1]), key(rep.results[i]));
  }
}

TEST(SpainAllPairs, HierStructuralShortfall) {
  // Every edge-node pair of the two-level fabric tops out below eight routes:
  // same-group pairs have six simple paths in total, cross-group pairs lose
  // half their candidates to rediscovery.
  Network net = generate(*parse_regular_spec("hier:2"));
  SelectionReport rep = spain_select_all_pairs(net, 8);
  EXPECT_EQ(rep.results.size(), 28u);
  EXPECT_EQ(rep.pairs_below_k, 28);
  for (const SelectionResult& r : rep.results)
    EXPECT_TRUE(r.flags.fewer_than_k);
}
