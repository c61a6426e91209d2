// Core graph types, shortest paths, and bounded path enumeration, checked
// against the brute-force oracles on hand-built and random networks.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pathtree/graph.hpp"
#include "test_util.hpp"

using namespace pathtree;
using pathtree::test::random_connected_network;

namespace {

Network diamond() {
  // 0-1-3 and 0-2-3, plus chord 1-2
  return Network(4, {{0, 1, 1.0}, {0, 2, 2.0}, {1, 2, 1.0}, {1, 3, 2.0}, {2, 3, 1.0}},
                 {0, 3});
}

}  // namespace

TEST(Network, RejectsMalformedInput) {
  EXPECT_THROW(Network(0, {}, {}), ValidationError);
  // self loop
  EXPECT_THROW(Network(2, {{0, 0, 1.0}}, {0, 1}), ValidationError);
  // endpoint out of range
  EXPECT_THROW(Network(2, {{0, 2, 1.0}}, {0, 1}), ValidationError);
  // non-positive weight
  EXPECT_THROW(Network(2, {{0, 1, 0.0}}, {0, 1}), ValidationError);
  EXPECT_THROW(Network(2, {{0, 1, -3.0}}, {0, 1}), ValidationError);
  // parallel edge, in either orientation
  EXPECT_THROW(Network(2, {{0, 1, 1.0}, {1, 0, 2.0}}, {0, 1}), ValidationError);
  // empty edge-node set
  EXPECT_THROW(Network(2, {{0, 1, 1.0}}, {}), ValidationError);
  // edge node out of range
  EXPECT_THROW(Network(2, {{0, 1, 1.0}}, {5}), ValidationError);
  // disconnected
  EXPECT_THROW(Network(4, {{0, 1, 1.0}, {2, 3, 1.0}}, {0, 3}), ValidationError);
  // duplicate labels
  EXPECT_THROW(Network(2, {{0, 1, 1.0}}, {0, 1}, {"a", "a"}), ValidationError);
  // wrong label count
  EXPECT_THROW(Network(2, {{0, 1, 1.0}}, {0, 1}, {"a"}), ValidationError);
}

TEST(Network, CanonicalEdgesAndLookup) {
  Network net(3, {{2, 1, 1.0}, {0, 2, 5.0}, {1, 0, 2.0}}, {0, 2});
  ASSERT_EQ(net.edge_count(), 3);
  // edges sorted by (u,v) with u < v
  EXPECT_EQ(net.edge(0).u, 0);
  EXPECT_EQ(net.edge(0).v, 1);
  EXPECT_EQ(net.edge(1).u, 0);
  EXPECT_EQ(net.edge(1).v, 2);
  EXPECT_EQ(net.edge(2).u, 1);
  EXPECT_EQ(net.edge(2).v, 2);
  // lookup works in both orientations
  EXPECT_EQ(net.edge_id(2, 1), 2);
  EXPECT_EQ(net.edge_id(1, 2), 2);
  EXPECT_EQ(net.edge_id(0, 0), -1);
  // adjacency is sorted by neighbour
  for (int v = 0; v < 3; ++v) {
    const auto& adj = net.adj(v);
    EXPECT_TRUE(std::is_sorted(adj.begin(), adj.end(),
                               [](auto& a, auto& b) { return a.to < b.to; }));
  }
  // labels default to decimal ids
  EXPECT_EQ(net.label(2), "2");
  EXPECT_EQ(net.find_node("1"), std::optional<int>(1));
  EXPECT_EQ(net.find_node("x"), std::nullopt);
}

TEST(Path, CostAndEdgeIds) {
  Network net = diamond();
  Path p{{0, 1, 2, 3}};
  EXPECT_DOUBLE_EQ(p.cost(net), 1.0 + 1.0 + 1.0);
  EXPECT_EQ(p.length(), 3);
  std::vector<int> ids = p.edge_ids(net);
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_EQ(net.edge(ids[0]).u, 0);
  EXPECT_EQ(net.edge(ids[0]).v, 1);
  // hop that is not an edge
  Path bad{{0, 3}};
  EXPECT_THROW(bad.cost(net), ValidationError);
}

TEST(Path, SimplePathPredicate) {
  Network net = diamond();
  EXPECT_TRUE(is_simple_network_path(net, Path{{0, 1, 3}}));
  EXPECT_FALSE(is_simple_network_path(net, Path{{0}}));           // no edge
  EXPECT_FALSE(is_simple_network_path(net, Path{{0, 3}}));        // non-edge hop
  EXPECT_FALSE(is_simple_network_path(net, Path{{0, 1, 2, 1}}));  // repeat
}

TEST(Path, CanonicalOrderIsCostLengthLex) {
  Network net(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}, {0, 3, 2.0}},
              {0, 3});
  std::vector<Path> paths{Path{{0, 2, 3}}, Path{{0, 3}}, Path{{0, 1, 3}}};
  sort_paths_canonical(net, paths);
  // all cost 2: the single-hop path wins on length, then 0-1-3 < 0-2-3 lex
  EXPECT_EQ(paths[0].nodes, (std::vector<int>{0, 3}));
  EXPECT_EQ(paths[1].nodes, (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(paths[2].nodes, (std::vector<int>{0, 2, 3}));
  // cheaper beats shorter
  Network tri(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 5.0}}, {0, 2});
  std::vector<Path> mixed{Path{{0, 2}}, Path{{0, 1, 2}}};
  sort_paths_canonical(tri, mixed);
  EXPECT_EQ(mixed[0].nodes, (std::vector<int>{0, 1, 2}));
}

TEST(Path, SortUniqueDropsDuplicates) {
  Network net = diamond();
  std::vector<Path> paths{Path{{0, 1, 3}}, Path{{0, 2, 3}}, Path{{0, 1, 3}}};
  sort_unique_canonical(net, paths);
  EXPECT_EQ(paths.size(), 2u);
}

TEST(PathSet, ValidatesMembership) {
  Network net = diamond();
  EXPECT_THROW(make_path_set(net, 0, 3, {Path{{0, 1, 2}}}), ValidationError);
  EXPECT_THROW(make_path_set(net, 0, 3, {Path{{0, 3}}}), ValidationError);
  PathSet ok = make_path_set(net, 0, 3, {Path{{0, 2, 3}}, Path{{0, 1, 3}}});
  EXPECT_EQ(ok.size(), 2);
  EXPECT_EQ(ok.paths[0].nodes, (std::vector<int>{0, 1, 3}));
}

TEST(Dijkstra, MatchesBruteForceOnRandomNetworks) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Network net = random_connected_network(rng, 4, 9, 4, 14);
    for (int x = 0; x < net.node_count(); ++x) {
      std::vector<double> dist = dijkstra_distances(net, x);
      for (int y = 0; y < net.node_count(); ++y) {
        if (x == y) continue;
        EXPECT_NEAR(dist[y], oracle::min_cost_brute(net, x, y), 1e-9)
            << "trial " << trial << " pair " << x << "," << y;
      }
    }
  }
}

TEST(Dijkstra, WitnessPathIsMinCostAndDeterministic) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    Network net = random_connected_network(rng, 4, 9, 4, 14);
    int x = 0, y = net.node_count() - 1;
    std::vector<double> dist = dijkstra_distances(net, x);
    Path p1 = shortest_path_from(net, x, y, dist);
    Path p2 = shortest_path_from(net, x, y, dist);
    EXPECT_EQ(p1.nodes, p2.nodes);
    EXPECT_TRUE(is_simple_network_path(net, p1));
    EXPECT_EQ(p1.origin(), x);
    EXPECT_EQ(p1.destination(), y);
    EXPECT_NEAR(p1.cost(net), oracle::min_cost_brute(net, x, y), 1e-9);
  }
}

TEST(Dijkstra, WeightOverridesDisableEdges) {
  Network net = diamond();
  // kill every edge at node 1: remaining route is 0-2-3
  std::vector<double> w(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    w[e] = (edge.u == 1 || edge.v == 1) ? kInf : edge.weight;
  }
  std::vector<double> dist = dijkstra_distances(net, 0, &w);
  EXPECT_DOUBLE_EQ(dist[3], 3.0);
  Path p = shortest_path_from(net, 0, 3, dist, &w);
  EXPECT_EQ(p.nodes, (std::vector<int>{0, 2, 3}));
  // kill the whole cut around 3: unreachable
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edge(e);
    if (edge.u == 3 || edge.v == 3) w[e] = kInf;
  }
  dist = dijkstra_distances(net, 3, &w);
  EXPECT_TRUE(std::isinf(dist[0]));
}

TEST(BfsHops, CountsMinimumHops) {
  Network net(5, {{0, 1, 9.0}, {1, 2, 9.0}, {2, 3, 9.0}, {3, 4, 9.0}, {0, 4, 9.0}},
              {0, 2});
  std::vector<int> hops = bfs_hops(net, 0);
  EXPECT_EQ(hops[0], 0);
  EXPECT_EQ(hops[1], 1);
  EXPECT_EQ(hops[2], 2);
  EXPECT_EQ(hops[3], 2);  // via 4
  EXPECT_EQ(hops[4], 1);
}

TEST(BoundedPaths, MatchesFilteredBruteForce) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Network net = random_connected_network(rng, 4, 8, 4, 12);
    int x = 0, y = net.node_count() - 1;
    double cost_bound = 1 + trial % 3 + dijkstra_distances(net, y)[x];
    int length_bound = 1 + trial % 4;
    std::vector<Path> got = bounded_simple_paths(net, x, y, cost_bound, length_bound);
    std::vector<Path> want;
    for (const Path& p : oracle::all_simple_paths(net, x, y))
      if (approx_le(p.cost(net), cost_bound) && p.length() <= length_bound)
        want.push_back(p);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_EQ(got[i].nodes, want[i].nodes);
  }
}

TEST(EnumerateMinCost, EqualsBruteForceSet) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    Network net = random_connected_network(rng, 4, 8, 4, 12, 4);
    int x = 0, y = net.node_count() - 1;
    PathSet got = enumerate_min_cost_paths(net, x, y);
    std::vector<Path> want = oracle::min_cost_paths_brute(net, x, y);
    ASSERT_EQ(got.size(), static_cast<int>(want.size())) << "trial " << trial;
    for (std::size_t i = 0; i < want.size(); ++i)
      EXPECT_EQ(got.paths[i].nodes, want[i].nodes);
  }
}

TEST(EnumerateInteresting, EqualsBruteForceSet) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Network net = random_connected_network(rng, 4, 8, 4, 12, 4);
    int x = 0, y = net.node_count() - 1;
    int h = trial % 3;
    double f = 1.0 + (trial % 4) * 0.5;
    PathSet got = enumerate_interesting_paths(net, x, y, h, f);
    std::vector<Path> want = oracle::interesting_paths_brute(net, x, y, h, f);
    sort_paths_canonical(net, want);
    ASSERT_EQ(got.size(), static_cast<int>(want.size()))
        << "trial " << trial << " h=" << h << " f=" << f;
    for (std::size_t i = 0; i < want.size(); ++i)
      EXPECT_EQ(got.paths[i].nodes, want[i].nodes);
  }
}

TEST(EnumerateInteresting, AlwaysContainsEveryMinCostPath) {
  // A long cheap path is interesting even when the hop bound excludes it.
  // 0-1-2-3 costs 3; direct 0-3 costs 3 too but in 1 hop.
  Network net(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 3.0}}, {0, 3});
  PathSet got = enumerate_interesting_paths(net, 0, 3, 0, 1.0);
  ASSERT_EQ(got.size(), 2);  // both min-cost paths, despite h=0
  EXPECT_EQ(got.paths[0].nodes, (std::vector<int>{0, 3}));
  EXPECT_EQ(got.paths[1].nodes, (std::vector<int>{0, 1, 2, 3}));
}

TEST(CheckPair, RejectsBadPairs) {
  Network net = diamond();
  EXPECT_THROW(check_pair(net, 0, 0), ValidationError);
  EXPECT_THROW(check_pair(net, -1, 3), ValidationError);
  EXPECT_THROW(check_pair(net, 0, 4), ValidationError);
}
