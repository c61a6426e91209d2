#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pathtree/bits.hpp"
#include "pathtree/graph.hpp"
#include "pathtree/metrics.hpp"
#include "pathtree/selection.hpp"

namespace pathtree {

// A tree in a forwarding set: a connected acyclic subgraph of the network.
struct Tree {
  Bits node_mask;
  Bits edge_mask;
  std::vector<int> edge_list;      // edge ids, insertion order
  std::vector<int> covered_paths;  // indices into the aggregation input
  int node_count = 0;

  int edge_count() const { return static_cast<int>(edge_list.size()); }

  std::vector<int> nodes() const {
    std::vector<int> out;
    for (int v = 0; v < node_mask.size(); ++v)
      if (node_mask.test(v)) out.push_back(v);
    return out;
  }

  std::vector<int> edges_sorted() const {
    std::vector<int> out = edge_list;
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline Tree empty_tree(const Network& net) {
  Tree t;
  t.node_mask = Bits(net.node_count());
  t.edge_mask = Bits(net.edge_count());
  return t;
}

inline void insert_into_tree(const Network& net, Tree& t, const Path& p) {
  for (int e : p.edge_ids(net)) {
    if (t.edge_mask.test(e)) continue;
    t.edge_mask.set(e);
    t.edge_list.push_back(e);
  }
  for (int v : p.nodes)
    if (!t.node_mask.test(v)) {
      t.node_mask.set(v);
      ++t.node_count;
    }
}

inline bool tree_covers(const Tree& t, const Bits& path_edges) {
  return t.edge_mask.contains(path_edges);
}

// Throws when t is not a tree subgraph of net. Wired behind
// AggregateOptions::validate_insertions as a post-mutation self-check.
inline void validate_tree(const Network& net, const Tree& t) {
  if (t.edge_count() != t.node_count - 1)
    throw std::logic_error("tree invariant broken: edge count != node count - 1");
  EpochDsu dsu(net.node_count());
  dsu.begin();
  for (int e : t.edge_list) {
    const Edge& edge = net.edge(e);
    if (!t.node_mask.test(edge.u) || !t.node_mask.test(edge.v))
      throw std::logic_error("tree invariant broken: edge endpoint not marked");
    if (!dsu.unite(edge.u, edge.v))
      throw std::logic_error("tree invariant broken: cycle");
  }
  // |E| = |V|-1 and acyclic imply connected over the marked nodes
}

namespace detail {

// Scratch shared by the compatibility tests so hot loops never allocate.
struct CompatScratch {
  EpochDsu dsu;
  std::vector<std::uint32_t> edge_stamp;
  std::uint32_t edge_epoch = 0;

  explicit CompatScratch(const Network& net)
      : dsu(net.node_count()), edge_stamp(net.edge_count(), 0) {}

  void begin() {
    dsu.begin();
    ++edge_epoch;
  }

  // Adds one edge to the union under construction; false means it closed a
  // cycle. Repeated edges are ignored.
  bool add_edge(const Network& net, int e) {
    if (edge_stamp[e] == edge_epoch) return true;
    edge_stamp[e] = edge_epoch;
    const Edge& edge = net.edge(e);
    return dsu.unite(edge.u, edge.v);
  }

  bool add_path(const Network& net, const Path& p) {
    for (std::size_t i = 1; i < p.nodes.size(); ++i)
      if (!add_edge(net, net.edge_id(p.nodes[i - 1], p.nodes[i]))) return false;
    return true;
  }
};

inline int compat_paths_impl(const Network& net, const Path& p, const Path& q,
                             const Bits& q_nodes, CompatScratch& scratch) {
  scratch.begin();
  scratch.add_path(net, p);
  if (!scratch.add_path(net, q)) return -1;
  int common = 0;
  for (int v : p.nodes)
    if (q_nodes.test(v)) ++common;
  return common;
}

inline int compat_path_tree_impl(const Network& net, const Path& p,
                                 const Tree& t, CompatScratch& scratch) {
  scratch.begin();
  for (int e : t.edge_list) scratch.add_edge(net, e);
  if (!scratch.add_path(net, p)) return -1;
  int common = 0;
  for (int v : p.nodes)
    if (t.node_mask.test(v)) ++common;
  return common;
}

inline int compat_pair_tree_impl(const Network& net, const Path& p,
                                 const Path& q, const Tree& t,
                                 CompatScratch& scratch) {
  scratch.begin();
  for (int e : t.edge_list) scratch.add_edge(net, e);
  if (!scratch.add_path(net, p)) return -1;
  if (!scratch.add_path(net, q)) return -1;
  int common = 0;
  for (int v : p.nodes)
    if (t.node_mask.test(v)) ++common;
  for (int v : q.nodes)
    if (t.node_mask.test(v)) ++common;
  return common;
}

inline Bits node_mask_of(const Network& net, const Path& p) {
  Bits m(net.node_count());
  for (int v : p.nodes) m.set(v);
  return m;
}

}  // namespace detail

// Compatibility degree of two paths: -1 when the union of their graphs is
// cyclic, otherwise the number of shared nodes. The entities are compatible
// when the degree is positive (a disconnected union is not mergeable).
inline int compat_paths(const Network& net, const Path& p, const Path& q) {
  detail::CompatScratch scratch(net);
  return detail::compat_paths_impl(net, p, q, detail::node_mask_of(net, q),
                                   scratch);
}

// Compatibility degree of a path and a tree: -1 when adding the path's edges
// closes a cycle, otherwise the number of the path's nodes already in the
// tree.
inline int compat_path_tree(const Network& net, const Path& p, const Tree& t) {
  detail::CompatScratch scratch(net);
  return detail::compat_path_tree_impl(net, p, t, scratch);
}

// Compatibility degree of a path pair and a tree: -1 on any cycle in the
// three-way union, otherwise |V_t ∩ V_p| + |V_t ∩ V_q|. A pair can be
// compatible with a tree even when one of its paths shares no node with it.
inline int compat_pair_tree(const Network& net, const Path& p, const Path& q,
                            const Tree& t) {
  detail::CompatScratch scratch(net);
  return detail::compat_pair_tree_impl(net, p, q, t, scratch);
}

// Static aggregation potential of paths[index] within its collection: the
// sum of its positive compatibility degrees against every other member.
inline std::int64_t aggregation_potential(const Network& net,
                                          const std::vector<Path>& paths,
                                          std::size_t index) {
  detail::CompatScratch scratch(net);
  Bits mine = detail::node_mask_of(net, paths[index]);
  std::int64_t sum = 0;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (j == index) continue;
    int d = detail::compat_paths_impl(net, paths[j], paths[index], mine, scratch);
    if (d > 0) sum += d;
  }
  return sum;
}

// Trees a one-LSP-per-path multipoint-to-point layout needs: (n-1)·k, one
// tree per (destination, path slot) regardless of path shapes.
inline std::int64_t lsp_mtp_tree_count(int n, int k) {
  if (n < 2)
    throw ValidationError("multipoint-to-point needs at least 2 edge nodes");
  if (k < 1) throw ValidationError("k must be at least 1");
  return static_cast<std::int64_t>(n - 1) * k;
}

struct PhaseLog {
  std::int64_t compatible_pairs = 0;
  std::int64_t pairs_both_covered = 0;
  std::int64_t pairs_inserted_into_tree = 0;
  std::int64_t pairs_started_tree = 0;
  std::int64_t one_covered_into_covering_tree = 0;
  std::int64_t one_covered_into_best_tree = 0;
  std::int64_t one_covered_postponed = 0;
  std::int64_t singles_total = 0;
  std::int64_t singles_already_covered = 0;
  std::int64_t singles_inserted_into_tree = 0;
  std::int64_t singles_started_tree = 0;
};

struct AggregationResult {
  std::vector<Tree> trees;
  std::vector<int> cover;  // input path index -> lowest covering tree index
  PhaseLog log;

  int tree_count() const { return static_cast<int>(trees.size()); }
};

struct AggregateOptions {
  bool validate_insertions = false;
  int jobs = 1;  // parallelism of the all-pairs compatibility phase only
};

namespace detail {

struct PairRec {
  int i;
  int j;
  int degree;
};

}  // namespace detail

// Aggregates a path collection into trees, deterministically. Four phases:
//   1. compatibility degree of every path pair; positive-degree pairs are
//      kept, and each path's aggregation potential is the sum of its
//      positive degrees;
//   2. pairs in decreasing (degree, joint potential, joint length) order:
//      both paths covered → skip; exactly one covered → the uncovered path
//      joins the covering tree when compatible, else the most compatible
//      tree, else waits; neither covered → the pair joins the tree
//      maximising pair-tree compatibility, or founds a new tree;
//   3. paths still uncovered, sorted by decreasing length;
//   4. each joins the tree maximising path-tree compatibility, or founds its
//      own tree.
// Remaining order ties fall back to canonical path order, then input
// position; tree ties go to the lowest creation index.
inline AggregationResult aggregate(const Network& net,
                                   const std::vector<Path>& paths,
                                   const AggregateOptions& options = {}) {
  const int s = static_cast<int>(paths.size());
  for (const Path& p : paths)
    if (!is_simple_network_path(net, p))
      throw ValidationError("aggregation input contains a non-simple path");

  AggregationResult result;
  if (s == 0) return result;

  // canonical rank of each input path, for deterministic tie-breaks
  std::vector<int> rank(s);
  {
    std::vector<int> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> cost(s);
    for (int i = 0; i < s; ++i) cost[i] = paths[i].cost(net);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (cost[a] != cost[b]) return cost[a] < cost[b];
      if (paths[a].length() != paths[b].length())
        return paths[a].length() < paths[b].length();
      if (paths[a].nodes != paths[b].nodes)
        return paths[a].nodes < paths[b].nodes;
      return a < b;
    });
    for (int i = 0; i < s; ++i) rank[order[i]] = i;
  }

  std::vector<Bits> edge_masks = path_edge_masks(net, paths);
  std::vector<Bits> node_masks;
  node_masks.reserve(s);
  for (const Path& p : paths) node_masks.push_back(detail::node_mask_of(net, p));

  // phase 1: all-pairs compatibility
  std::vector<std::vector<detail::PairRec>> row_pairs(s);
  detail::parallel_for(s, options.jobs, [&](int i) {
    detail::CompatScratch scratch(net);
    for (int j = i + 1; j < s; ++j) {
      int d = detail::compat_paths_impl(net, paths[i], paths[j], node_masks[j],
                                        scratch);
      if (d > 0) row_pairs[i].push_back({i, j, d});
    }
  });
  std::vector<detail::PairRec> pairs;
  std::vector<std::int64_t> potential(s, 0);
  for (int i = 0; i < s; ++i)
    for (const detail::PairRec& pr : row_pairs[i]) {
      potential[pr.i] += pr.degree;
      potential[pr.j] += pr.degree;
      pairs.push_back(pr);
    }
  row_pairs.clear();
  result.log.compatible_pairs = static_cast<std::int64_t>(pairs.size());

  // processing order: degree, joint potential, joint length, all decreasing;
  // then canonical rank of the pair's paths
  std::sort(pairs.begin(), pairs.end(),
            [&](const detail::PairRec& a, const detail::PairRec& b) {
              if (a.degree != b.degree) return a.degree > b.degree;
              std::int64_t pa = potential[a.i] + potential[a.j];
              std::int64_t pb = potential[b.i] + potential[b.j];
              if (pa != pb) return pa > pb;
              int la = paths[a.i].length() + paths[a.j].length();
              int lb = paths[b.i].length() + paths[b.j].length();
              if (la != lb) return la > lb;
              int a_lo = std::min(rank[a.i], rank[a.j]);
              int a_hi = std::max(rank[a.i], rank[a.j]);
              int b_lo = std::min(rank[b.i], rank[b.j]);
              int b_hi = std::max(rank[b.i], rank[b.j]);
              if (a_lo != b_lo) return a_lo < b_lo;
              return a_hi < b_hi;
            });

  std::vector<Tree> trees;
  detail::CompatScratch scratch(net);

  auto covering_tree = [&](int path_idx) -> int {
    for (int t = 0; t < static_cast<int>(trees.size()); ++t)
      if (tree_covers(trees[t], edge_masks[path_idx])) return t;
    return -1;
  };
  auto insert_path = [&](int t, int path_idx) {
    insert_into_tree(net, trees[t], paths[path_idx]);
  };
  // A pair inserts as one unit and may pass through a transient forest state
  // when only its partner touches the tree, so validation runs per unit, not
  // per path.
  auto check_tree = [&](int t) {
    if (options.validate_insertions) validate_tree(net, trees[t]);
  };
  auto best_tree_for_path = [&](int path_idx) -> int {
    int best = -1, best_d = 0;
    for (int t = 0; t < static_cast<int>(trees.size()); ++t) {
      int d = detail::compat_path_tree_impl(net, paths[path_idx], trees[t],
                                            scratch);
      if (d > best_d) {
        best_d = d;
        best = t;
      }
    }
    return best;
  };

  // phase 2: pair aggregation
  for (const detail::PairRec& pr : pairs) {
    int ti = covering_tree(pr.i);
    int tj = covering_tree(pr.j);
    if (ti >= 0 && tj >= 0) {
      ++result.log.pairs_both_covered;
      continue;
    }
    if (ti < 0 && tj < 0) {
      int best = -1, best_d = 0;
      for (int t = 0; t < static_cast<int>(trees.size()); ++t) {
        int d = detail::compat_pair_tree_impl(net, paths[pr.i], paths[pr.j],
                                              trees[t], scratch);
        if (d > best_d) {
          best_d = d;
          best = t;
        }
      }
      if (best >= 0) {
        insert_path(best, pr.i);
        insert_path(best, pr.j);
        check_tree(best);
        ++result.log.pairs_inserted_into_tree;
      } else {
        trees.push_back(empty_tree(net));
        insert_path(static_cast<int>(trees.size()) - 1, pr.i);
        insert_path(static_cast<int>(trees.size()) - 1, pr.j);
        check_tree(static_cast<int>(trees.size()) - 1);
        ++result.log.pairs_started_tree;
      }
      continue;
    }
    // exactly one covered
    int covered_tree = ti >= 0 ? ti : tj;
    int loose = ti >= 0 ? pr.j : pr.i;
    int d = detail::compat_path_tree_impl(net, paths[loose], trees[covered_tree],
                                          scratch);
    if (d > 0) {
      insert_path(covered_tree, loose);
      check_tree(covered_tree);
      ++result.log.one_covered_into_covering_tree;
    } else {
      int best = best_tree_for_path(loose);
      if (best >= 0) {
        insert_path(best, loose);
        check_tree(best);
        ++result.log.one_covered_into_best_tree;
      } else {
        ++result.log.one_covered_postponed;
      }
    }
  }

  // phase 3: the paths no pair processing covered, longest first
  std::vector<int> singles;
  for (int i = 0; i < s; ++i)
    if (covering_tree(i) < 0) singles.push_back(i);
  std::sort(singles.begin(), singles.end(), [&](int a, int b) {
    if (paths[a].length() != paths[b].length())
      return paths[a].length() > paths[b].length();
    return rank[a] < rank[b];
  });
  result.log.singles_total = static_cast<std::int64_t>(singles.size());

  // phase 4: single-path aggregation
  for (int idx : singles) {
    if (covering_tree(idx) >= 0) {
      ++result.log.singles_already_covered;
      continue;
    }
    int best = best_tree_for_path(idx);
    if (best >= 0) {
      insert_path(best, idx);
      check_tree(best);
      ++result.log.singles_inserted_into_tree;
    } else {
      trees.push_back(empty_tree(net));
      insert_path(static_cast<int>(trees.size()) - 1, idx);
      check_tree(static_cast<int>(trees.size()) - 1);
      ++result.log.singles_started_tree;
    }
  }

  // final cover map; every path must have landed somewhere
  result.cover.assign(s, -1);
  for (int i = 0; i < s; ++i) {
    result.cover[i] = covering_tree(i);
    if (result.cover[i] < 0)
      throw std::logic_error("aggregation left a path uncovered");
  }
  // covered_paths lists every input path a tree covers, not just the ones
  // the cover map assigns to it
  for (Tree& t : trees)
    for (int i = 0; i < s; ++i)
      if (tree_covers(t, edge_masks[i])) t.covered_paths.push_back(i);
  result.trees = std::move(trees);
  return result;
}

}  // namespace pathtree
