#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "pathtree/bits.hpp"
#include "pathtree/graph.hpp"

namespace pathtree {

// Sharing penalties are (|S|+1)^occurrences; that outgrows 64 bits already
// around 16 paths over one edge, so keep them exact with a bignum.
using BigInt = boost::multiprecision::cpp_int;

inline std::vector<Bits> path_edge_masks(const Network& net,
                                         const std::vector<Path>& paths) {
  std::vector<Bits> masks;
  masks.reserve(paths.size());
  for (const Path& p : paths) {
    Bits m(net.edge_count());
    for (int e : p.edge_ids(net)) m.set(e);
    masks.push_back(std::move(m));
  }
  return masks;
}

// conflict[i] has bit j set when paths i and j share at least one edge.
inline std::vector<Bits> edge_conflict_masks(const std::vector<Bits>& edge_masks) {
  int n = static_cast<int>(edge_masks.size());
  std::vector<Bits> conflict(n, Bits(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge_masks[i].intersects(edge_masks[j])) {
        conflict[i].set(j);
        conflict[j].set(i);
      }
  return conflict;
}

namespace detail {

// Exact max independent set on the conflict graph, branch and bound. The
// candidate sets at play are small (path selections, at most a few dozen),
// so the classic include/exclude search with the |cand| bound is plenty.
inline void mis_rec(const std::vector<Bits>& conflict, Bits cand, int chosen,
                    int& best) {
  if (chosen + cand.count() <= best) return;
  int v = cand.lowest();
  // absorb candidates that conflict with nothing else in cand
  while (v >= 0) {
    Bits rest = cand;
    rest.reset(v);
    if (conflict[v].intersects(rest)) break;
    ++chosen;
    cand = rest;
    v = cand.lowest();
  }
  if (v < 0) {
    if (chosen > best) best = chosen;
    return;
  }
  Bits inc = cand;
  inc.reset(v);
  mis_rec(conflict, inc.and_not(conflict[v]), chosen + 1, best);
  Bits exc = cand;
  exc.reset(v);
  mis_rec(conflict, exc, chosen, best);
}

}  // namespace detail

inline int max_disjoint_subset(const std::vector<Bits>& conflict) {
  int n = static_cast<int>(conflict.size());
  if (n == 0) return 0;
  Bits cand(n);
  for (int i = 0; i < n; ++i) cand.set(i);
  int best = 0;
  detail::mis_rec(conflict, cand, 0, best);
  return best;
}

// Disjointness degree: size of the largest subset of pairwise edge-disjoint
// paths. 0 for the empty set, 1 when no two paths are disjoint.
inline int disjointness_degree(const Network& net, const std::vector<Path>& paths) {
  if (paths.empty()) return 0;
  return max_disjoint_subset(edge_conflict_masks(path_edge_masks(net, paths)));
}

// sharing(S) = Σ over edges of penalty(S, e), where penalty is 0 when the
// edge is used by at most one path of S and (|S|+1)^occurrences otherwise.
// Lower is better; 0 exactly when S is pairwise edge-disjoint.
inline BigInt sharing(const Network& net, const std::vector<Path>& paths) {
  std::vector<int> occ(net.edge_count(), 0);
  for (const Path& p : paths)
    for (int e : p.edge_ids(net)) ++occ[e];
  const unsigned base = static_cast<unsigned>(paths.size()) + 1;
  BigInt total = 0;
  for (int e = 0; e < net.edge_count(); ++e)
    if (occ[e] >= 2)
      total += boost::multiprecision::pow(BigInt(base),
                                          static_cast<unsigned>(occ[e]));
  return total;
}

}  // namespace pathtree
