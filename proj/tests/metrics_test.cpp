// Disjointness degree and the sharing penalty, validated against exhaustive
// subset enumeration, plus the bit-set and union-find building blocks.

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "pathtree/bits.hpp"
#include "pathtree/metrics.hpp"
#include "test_util.hpp"

using namespace pathtree;
using pathtree::test::random_connected_network;
using pathtree::test::random_simple_path;

TEST(Bits, BasicOperations) {
  Bits b(130);
  EXPECT_FALSE(b.any());
  b.set(0);
  b.set(64);
  b.set(129);
  EXPECT_EQ(b.count(), 3);
  EXPECT_TRUE(b.test(64));
  EXPECT_FALSE(b.test(63));
  EXPECT_EQ(b.lowest(), 0);
  b.reset(0);
  EXPECT_EQ(b.lowest(), 64);

  Bits c(130);
  c.set(64);
  EXPECT_TRUE(b.intersects(c));
  EXPECT_TRUE(b.contains(c));
  EXPECT_FALSE(c.contains(b));
  c.set(5);
  EXPECT_FALSE(b.contains(c));

  Bits d = b;
  d &= c;
  EXPECT_EQ(d.count(), 1);
  d = b;
  d |= c;
  EXPECT_EQ(d.count(), 3);  // {5, 64, 129}
  d = d.and_not(c);
  EXPECT_FALSE(d.test(64));
  EXPECT_TRUE(d.test(129));
}

TEST(EpochDsu, DetectsCyclesAcrossReuses) {
  EpochDsu dsu(4);
  dsu.begin();
  EXPECT_TRUE(dsu.unite(0, 1));
  EXPECT_TRUE(dsu.unite(1, 2));
  EXPECT_FALSE(dsu.unite(0, 2));  // closes a cycle
  EXPECT_TRUE(dsu.unite(2, 3));
  // a fresh epoch forgets everything
  dsu.begin();
  EXPECT_TRUE(dsu.unite(0, 2));
  EXPECT_TRUE(dsu.unite(0, 1));
  EXPECT_FALSE(dsu.unite(1, 2));
}

TEST(Disjointness, PairwiseDisjointSetScoresItsSize) {
  Network net(6, {{0, 1, 1.0}, {1, 5, 1.0}, {0, 2, 1.0}, {2, 5, 1.0},
                  {0, 3, 1.0}, {3, 5, 1.0}, {0, 4, 1.0}, {4, 5, 1.0}},
              {0, 5});
  std::vector<Path> paths{Path{{0, 1, 5}}, Path{{0, 2, 5}}, Path{{0, 3, 5}},
                          Path{{0, 4, 5}}};
  EXPECT_EQ(disjointness_degree(net, paths), 4);
  EXPECT_EQ(sharing(net, paths), BigInt(0));
  // one path sharing an edge caps the independent set at 4 still
  paths.push_back(Path{{0, 1, 5}});
  EXPECT_EQ(disjointness_degree(net, paths), 4);
}

TEST(Disjointness, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    Network net = random_connected_network(rng, 4, 8, 5, 13);
    std::vector<Path> paths;
    int count = 1 + trial % 8;
    for (int i = 0; i < count; ++i) paths.push_back(random_simple_path(rng, net));
    EXPECT_EQ(disjointness_degree(net, paths), oracle::disjointness_brute(net, paths))
        << "trial " << trial;
  }
}

TEST(Sharing, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    Network net = random_connected_network(rng, 4, 8, 5, 13);
    std::vector<Path> paths;
    int count = 1 + trial % 8;
    for (int i = 0; i < count; ++i) paths.push_back(random_simple_path(rng, net));
    EXPECT_EQ(sharing(net, paths), oracle::sharing_brute(net, paths))
        << "trial " << trial;
  }
}

TEST(Sharing, PenaltyIsExponentialInOccupancy) {
  // three paths over the same single edge: occ=3, base=|S|+1=4 -> 4^3
  Network net(2, {{0, 1, 1.0}}, {0, 1});
  std::vector<Path> paths{Path{{0, 1}}, Path{{0, 1}}, Path{{0, 1}}};
  EXPECT_EQ(sharing(net, paths), BigInt(64));
  // a single use of an edge carries no penalty
  std::vector<Path> one{Path{{0, 1}}};
  EXPECT_EQ(sharing(net, one), BigInt(0));
}

TEST(Sharing, ExactBeyondSixtyFourBits) {
  // 20 copies of the same edge: (21)^20 > 2^64; cross-check via binary pow
  Network net(2, {{0, 1, 1.0}}, {0, 1});
  std::vector<Path> paths(20, Path{{0, 1}});
  BigInt expected = 1;
  for (int i = 0; i < 20; ++i) expected *= 21;
  EXPECT_EQ(sharing(net, paths), expected);
  EXPECT_GT(sharing(net, paths), BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST(DisjointnessDegree, SinglePathIsOne) {
  Network net(2, {{0, 1, 1.0}}, {0, 1});
  EXPECT_EQ(disjointness_degree(net, {Path{{0, 1}}}), 1);
  EXPECT_EQ(disjointness_degree(net, {}), 0);
}
