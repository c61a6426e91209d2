#pragma once

// Brute-force reference implementations used only by tests. Everything here
// favours obviousness over speed and shares no search code with the library:
// plain unpruned DFS, exhaustive subset enumeration, direct formula
// evaluation.

#include <algorithm>
#include <limits>
#include <vector>

#include "pathtree/graph.hpp"
#include "pathtree/metrics.hpp"

namespace oracle {

using pathtree::Network;
using pathtree::Path;

// Every simple x→y path, canonical order. Exponential, fine on tiny graphs.
inline std::vector<Path> all_simple_paths(const Network& net, int x, int y) {
  std::vector<Path> out;
  std::vector<int> cur{x};
  std::vector<char> used(net.node_count(), 0);
  used[x] = 1;
  auto rec = [&](auto&& self, int v) -> void {
    if (v == y) {
      out.emplace_back(Path{cur});
      return;
    }
    for (const pathtree::AdjEntry& a : net.adj(v)) {
      if (used[a.to]) continue;
      used[a.to] = 1;
      cur.push_back(a.to);
      self(self, a.to);
      cur.pop_back();
      used[a.to] = 0;
    }
  };
  rec(rec, x);
  pathtree::sort_paths_canonical(net, out);
  return out;
}

inline double min_cost_brute(const Network& net, int x, int y) {
  double best = pathtree::kInf;
  for (const Path& p : all_simple_paths(net, x, y)) best = std::min(best, p.cost(net));
  return best;
}

inline std::vector<Path> min_cost_paths_brute(const Network& net, int x, int y) {
  std::vector<Path> all = all_simple_paths(net, x, y);
  double best = min_cost_brute(net, x, y);
  std::vector<Path> out;
  for (const Path& p : all)
    if (pathtree::approx_eq(p.cost(net), best)) out.push_back(p);
  return out;
}

inline std::vector<Path> interesting_paths_brute(const Network& net, int x, int y,
                                                 int h, double f) {
  std::vector<Path> min_paths = min_cost_paths_brute(net, x, y);
  // optimal path: minimum cost, then fewest hops, then lexicographic
  const Path& opt = min_paths.front();
  double opt_cost = opt.cost(net);
  std::vector<Path> out;
  for (const Path& p : all_simple_paths(net, x, y)) {
    bool near = p.length() <= opt.length() + h &&
                pathtree::approx_le(p.cost(net), f * opt_cost);
    bool is_min = pathtree::approx_eq(p.cost(net), opt_cost);
    if (near || is_min) out.push_back(p);
  }
  return out;
}

// True when the paths are pairwise edge-disjoint, by direct pair checks on
// sorted edge lists.
inline bool pairwise_disjoint(const Network& net, const std::vector<Path>& paths) {
  std::vector<std::vector<int>> edges;
  for (const Path& p : paths) {
    std::vector<int> ids = p.edge_ids(net);
    std::sort(ids.begin(), ids.end());
    edges.push_back(std::move(ids));
  }
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(edges[i].begin(), edges[i].end(), edges[j].begin(),
                            edges[j].end(), std::back_inserter(common));
      if (!common.empty()) return false;
    }
  return true;
}

// Disjointness degree by trying all 2^|S| subsets.
inline int disjointness_brute(const Network& net, const std::vector<Path>& paths) {
  int n = static_cast<int>(paths.size());
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Path> sub;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(paths[i]);
    if (static_cast<int>(sub.size()) <= best) continue;
    if (pairwise_disjoint(net, sub)) best = static_cast<int>(sub.size());
  }
  return best;
}

// sharing(S) evaluated the flat-footed way: walk the network's edges, count
// occurrences by scanning every path's hops, apply the penalty formula.
inline pathtree::BigInt sharing_brute(const Network& net,
                                      const std::vector<Path>& paths) {
  pathtree::BigInt total = 0;
  pathtree::BigInt base = static_cast<int>(paths.size()) + 1;
  for (const pathtree::Edge& e : net.edges()) {
    int occ = 0;
    for (const Path& p : paths)
      for (std::size_t i = 1; i < p.nodes.size(); ++i) {
        int a = p.nodes[i - 1], b = p.nodes[i];
        if ((a == e.u && b == e.v) || (a == e.v && b == e.u)) ++occ;
      }
    if (occ >= 2) {
      pathtree::BigInt pen = 1;
      for (int i = 0; i < occ; ++i) pen *= base;
      total += pen;
    }
  }
  return total;
}

// Reference for best_subset: enumerate every n-subset of candidates in
// lexicographic index order (candidates already canonically sorted), score
// with the brute-force metrics, keep the first best.
inline std::vector<Path> best_subset_brute(const Network& net,
                                           const std::vector<Path>& candidates,
                                           int n, const std::vector<Path>& fixed) {
  int c = static_cast<int>(candidates.size());
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  std::vector<int> best_pick;
  int best_d = -1;
  pathtree::BigInt best_sharing = 0;
  auto evaluate = [&]() {
    std::vector<Path> full = fixed;
    for (int i : pick) full.push_back(candidates[i]);
    int d = disjointness_brute(net, full);
    pathtree::BigInt s = sharing_brute(net, full);
    if (d > best_d || (d == best_d && s < best_sharing)) {
      best_d = d;
      best_sharing = s;
      best_pick = pick;
    }
  };
  if (n == 0) return {};
  for (;;) {
    evaluate();
    // next combination in lexicographic order
    int i = n - 1;
    while (i >= 0 && pick[i] == c - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::vector<Path> out;
  for (int i : best_pick) out.push_back(candidates[i]);
  return out;
}

// Number of simple x→y paths, stopping early once `limit` is exceeded.
inline long count_simple_paths(const Network& net, int x, int y,
                               long limit = std::numeric_limits<long>::max()) {
  long count = 0;
  std::vector<char> used(net.node_count(), 0);
  used[x] = 1;
  auto rec = [&](auto&& self, int v) -> void {
    if (count > limit) return;
    if (v == y) {
      ++count;
      return;
    }
    for (const pathtree::AdjEntry& a : net.adj(v)) {
      if (used[a.to]) continue;
      used[a.to] = 1;
      self(self, a.to);
      used[a.to] = 0;
    }
  };
  rec(rec, x);
  return count;
}

}  // namespace oracle
