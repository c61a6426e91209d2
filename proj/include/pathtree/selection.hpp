#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "pathtree/graph.hpp"
#include "pathtree/metrics.hpp"

namespace pathtree {

struct SelectionParams {
  int k = 1;
  int h = 0;       // hop slack over the optimal path
  double f = 1.0;  // cost factor over the optimal cost
  std::optional<int> threshold;  // adaptive search-set cap; adaptive only

  void validate() const {
    if (k < 1) throw ValidationError("k must be at least 1");
    if (h < 0) throw ValidationError("h must be non-negative");
    if (f < 1.0) throw ValidationError("f must be at least 1");
    if (threshold && *threshold < 1)
      throw ValidationError("threshold must be positive");
  }
};

struct SelectionFlags {
  bool fewer_than_k = false;
  bool params_adjusted = false;
  bool extra_disjoint_added = false;
  bool no_disjoint_pair_exists = false;
};

struct SelectionResult {
  int origin = -1;
  int destination = -1;
  PathSet paths;
  int disjointness = 0;
  SelectionFlags flags;
  int effective_h = 0;
  double effective_f = 1.0;
  int optimal_length = 0;
  double optimal_cost = 0.0;
};

namespace detail {

// Exhaustive subset search behind best_subset. Walks n-subsets of the
// candidate list in lexicographic index order (candidates canonically
// sorted), keeping occurrence counts and the exact sharing sum incrementally.
// Prunes on the disjointness upper bound (current degree + slots left) and,
// within equal degree, on the sharing lower bound (sharing only grows as
// paths are added). First strict improvement wins, so ties resolve to the
// lexicographically smallest subset.
class BestSubsetSearch {
 public:
  BestSubsetSearch(const Network& net, std::vector<Path> candidates, int n,
                   const std::vector<Path>& fixed)
      : net_(net), cands_(std::move(candidates)), n_(n) {
    sort_paths_canonical(net_, cands_);
    c_ = static_cast<int>(cands_.size());
    f_count_ = static_cast<int>(fixed.size());
    std::vector<Path> all = cands_;
    all.insert(all.end(), fixed.begin(), fixed.end());
    edge_lists_.reserve(all.size());
    for (const Path& p : all) edge_lists_.push_back(p.edge_ids(net_));
    conflict_ = edge_conflict_masks(path_edge_masks(net_, all));

    const int total = n_ + f_count_;
    pow_.resize(total + 2);
    pow_[0] = 1;
    for (int i = 1; i <= total + 1; ++i) pow_[i] = pow_[i - 1] * (total + 1);

    occ_.assign(net_.edge_count(), 0);
    chosen_ = Bits(static_cast<int>(all.size()));
    for (int i = c_; i < static_cast<int>(all.size()); ++i) {
      chosen_.set(i);
      bump_occ(edge_lists_[i]);
    }
    fixed_floor_ = share_;
    disj_fixed_ = current_disj();
    max_d_ = n_ + disj_fixed_;
  }

  std::vector<Path> run() {
    if (n_ == 0) return {};
    rec(0, disj_fixed_);
    std::vector<Path> out;
    out.reserve(best_pick_.size());
    for (int i : best_pick_) out.push_back(cands_[i]);
    return out;
  }

 private:
  void bump_occ(const std::vector<int>& edges) {
    for (int e : edges) {
      int o = occ_[e]++;
      if (o == 1)
        share_ += pow_[2];
      else if (o >= 2)
        share_ += pow_[o + 1] - pow_[o];
    }
  }

  void drop_occ(const std::vector<int>& edges) {
    for (int e : edges) {
      int o = --occ_[e];
      if (o == 1)
        share_ -= pow_[2];
      else if (o >= 2)
        share_ -= pow_[o + 1] - pow_[o];
    }
  }

  int current_disj() const {
    int best = 0;
    mis_rec(conflict_, chosen_, 0, best);
    return best;
  }

  void rec(int start, int d_cur) {
    if (static_cast<int>(pick_.size()) == n_) {
      if (d_cur > best_d_ || (d_cur == best_d_ && share_ < best_share_)) {
        best_d_ = d_cur;
        best_share_ = share_;
        best_pick_ = pick_;
        if (best_d_ == max_d_ && best_share_ == fixed_floor_) stop_ = true;
      }
      return;
    }
    const int slots = n_ - static_cast<int>(pick_.size());
    for (int i = start; i + slots <= c_; ++i) {
      if (stop_) return;
      pick_.push_back(i);
      chosen_.set(i);
      bump_occ(edge_lists_[i]);
      int d_new = current_disj();
      int ub = d_new + slots - 1;
      bool promising =
          ub > best_d_ || (ub == best_d_ && share_ < best_share_);
      if (promising) rec(i + 1, d_new);
      drop_occ(edge_lists_[i]);
      chosen_.reset(i);
      pick_.pop_back();
      if (stop_) return;
    }
  }

  const Network& net_;
  std::vector<Path> cands_;
  int n_;
  int c_ = 0;
  int f_count_ = 0;
  std::vector<std::vector<int>> edge_lists_;
  std::vector<Bits> conflict_;
  std::vector<BigInt> pow_;
  std::vector<int> occ_;
  Bits chosen_;
  BigInt share_ = 0;
  BigInt fixed_floor_ = 0;
  int disj_fixed_ = 0;
  int max_d_ = 0;
  std::vector<int> pick_;
  std::vector<int> best_pick_;
  int best_d_ = -1;
  BigInt best_share_ = 0;
  bool stop_ = false;
};

}  // namespace detail

// The n-subset R of `candidates` maximising the disjointness degree of
// R ∪ fixed and, among those, minimising sharing(R ∪ fixed). Ties resolve to
// the lexicographically smallest subset under the canonical path order.
// candidates and fixed must be disjoint collections of simple paths.
inline std::vector<Path> best_subset(const Network& net,
                                     const std::vector<Path>& candidates, int n,
                                     const std::vector<Path>& fixed = {}) {
  if (n < 0 || n > static_cast<int>(candidates.size()))
    throw ValidationError("subset size out of range");
  for (const Path& p : candidates)
    for (const Path& q : fixed)
      if (p == q) throw ValidationError("candidates and fixed paths overlap");
  detail::BestSubsetSearch search(net, candidates, n, fixed);
  return search.run();
}

namespace detail {

// Everything about one (x, y) pair the selection passes reuse: distances and
// hop counts to y, the minimum-cost path set, the optimal path's cost/length.
struct PairEnv {
  std::vector<double> dist_y;
  std::vector<int> hops_y;
  std::vector<Path> min_paths;
  double opt_cost = 0.0;
  int opt_length = 0;
};

inline PairEnv make_pair_env(const Network& net, int x, int y) {
  check_pair(net, x, y);
  PairEnv env;
  env.dist_y = dijkstra_distances(net, y);
  env.hops_y = bfs_hops(net, y);
  env.min_paths = bounded_simple_paths(net, x, y, env.dist_y[x],
                                       net.node_count() - 1, env.dist_y,
                                       env.hops_y);
  env.opt_cost = env.dist_y[x];
  env.opt_length = env.min_paths.front().length();
  return env;
}

inline std::vector<Path> interesting_from_env(const Network& net, int x, int y,
                                              const PairEnv& env, int h,
                                              double f) {
  std::vector<Path> paths =
      bounded_simple_paths(net, x, y, f * env.opt_cost, env.opt_length + h,
                           env.dist_y, env.hops_y);
  paths.insert(paths.end(), env.min_paths.begin(), env.min_paths.end());
  sort_unique_canonical(net, paths);
  return paths;
}

// The three-way core: enough minimum-cost paths → pick among them; too few
// interesting paths → take them all; otherwise keep every minimum-cost path
// and fill the remaining slots from the rest of the interesting set.
inline std::vector<Path> select_core(const Network& net,
                                     const std::vector<Path>& min_paths,
                                     const std::vector<Path>& interesting,
                                     int k, SelectionFlags& flags) {
  if (static_cast<int>(min_paths.size()) >= k)
    return best_subset(net, min_paths, k, {});
  if (static_cast<int>(interesting.size()) <= k) {
    if (static_cast<int>(interesting.size()) < k) flags.fewer_than_k = true;
    return interesting;
  }
  std::vector<Path> rest;
  auto less = [&net](const Path& a, const Path& b) {
    return canonical_less(net, a, b);
  };
  std::set_difference(interesting.begin(), interesting.end(), min_paths.begin(),
                      min_paths.end(), std::back_inserter(rest), less);
  std::vector<Path> chosen =
      best_subset(net, rest, k - static_cast<int>(min_paths.size()), min_paths);
  std::vector<Path> out = min_paths;
  out.insert(out.end(), chosen.begin(), chosen.end());
  sort_paths_canonical(net, out);
  return out;
}

// Cheapest x→y path sharing no edge with any path in `taken`, if one exists.
inline std::optional<Path> disjoint_extra(const Network& net, int x, int y,
                                          const std::vector<Path>& taken) {
  std::vector<double> w(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) w[e] = net.edge(e).weight;
  for (const Path& p : taken)
    for (int e : p.edge_ids(net)) w[e] = kInf;
  std::vector<double> dist = dijkstra_distances(net, x, &w);
  if (!std::isfinite(dist[y])) return std::nullopt;
  return shortest_path_from(net, x, y, dist, &w);
}

inline void check_edge_node_pair(const Network& net, int x, int y) {
  check_pair(net, x, y);
  if (x > y) throw ValidationError("pair must be ordered: origin < destination");
  if (!net.is_edge_node(x) || !net.is_edge_node(y))
    throw ValidationError("origin and destination must be edge nodes");
}

inline SelectionResult make_result(const Network& net, int x, int y,
                                   const PairEnv& env, std::vector<Path> sel,
                                   SelectionFlags flags, int h, double f) {
  SelectionResult r;
  r.origin = x;
  r.destination = y;
  r.paths = make_path_set(net, x, y, std::move(sel));
  r.disjointness = disjointness_degree(net, r.paths.paths);
  r.flags = flags;
  r.effective_h = h;
  r.effective_f = f;
  r.optimal_length = env.opt_length;
  r.optimal_cost = env.opt_cost;
  return r;
}

}  // namespace detail

// Plain selection with the parameters exactly as given. No adjustment, no
// disjointness repair; threshold is ignored.
inline SelectionResult select_paths(const Network& net, int x, int y,
                                    const SelectionParams& params) {
  params.validate();
  detail::check_edge_node_pair(net, x, y);
  detail::PairEnv env = detail::make_pair_env(net, x, y);
  SelectionFlags flags;
  std::vector<Path> interesting;
  if (static_cast<int>(env.min_paths.size()) < params.k)
    interesting =
        detail::interesting_from_env(net, x, y, env, params.h, params.f);
  std::vector<Path> sel =
      detail::select_core(net, env.min_paths, interesting, params.k, flags);
  if (static_cast<int>(sel.size()) < params.k) flags.fewer_than_k = true;
  return detail::make_result(net, x, y, env, std::move(sel), flags, params.h,
                             params.f);
}

// Adaptive selection. Shrinks h (first) and then f in 0.25 steps while the
// interesting set exceeds the threshold; grows them alternately (h up to
// |V|-2, f in 0.25 steps up to 10, then doubling) while it cannot yet supply
// k paths, so a pair only comes back short when the network genuinely has
// fewer than k simple paths. When the chosen set has disjointness 1 and a
// fully edge-disjoint alternative exists, the cheapest such path is added on
// top, whatever its cost or length.
inline SelectionResult select_paths_adaptive(const Network& net, int x, int y,
                                             const SelectionParams& params) {
  params.validate();
  if (!params.threshold)
    throw ValidationError("adaptive selection requires a threshold");
  detail::check_edge_node_pair(net, x, y);
  detail::PairEnv env = detail::make_pair_env(net, x, y);

  int h = params.h;
  double f = params.f;
  SelectionFlags flags;
  std::vector<Path> interesting =
      detail::interesting_from_env(net, x, y, env, h, f);

  const int threshold = *params.threshold;
  while (static_cast<int>(interesting.size()) > threshold &&
         (h > 0 || f > 1.0)) {
    if (h > 0)
      --h;
    else
      f = std::max(1.0, f - 0.25);
    flags.params_adjusted = true;
    interesting = detail::interesting_from_env(net, x, y, env, h, f);
  }

  if (static_cast<int>(interesting.size()) < params.k) {
    const int h_cap = net.node_count() - 2;
    const double f_cap = 10.0;
    // Cost of any simple path is at most the sum of the |V|-1 heaviest
    // edges; once f reaches that multiple of the optimum (and h its cap),
    // the interesting set is every simple path and growth must stop.
    std::vector<double> weights;
    weights.reserve(net.edge_count());
    for (const Edge& e : net.edges()) weights.push_back(e.weight);
    std::sort(weights.rbegin(), weights.rend());
    double heaviest = 0.0;
    for (int i = 0; i < std::min<int>(net.node_count() - 1, weights.size()); ++i)
      heaviest += weights[i];
    const double f_all = std::max(f, heaviest / env.opt_cost);

    bool bump_h = true;
    while (static_cast<int>(interesting.size()) < params.k) {
      bool changed = false;
      if (h < h_cap || f < f_cap) {
        if (bump_h) {
          if (h < h_cap) {
            ++h;
          } else {
            f = std::min(f_cap, f + 0.25);
          }
        } else {
          if (f < f_cap) {
            f = std::min(f_cap, f + 0.25);
          } else {
            ++h;
          }
        }
        bump_h = !bump_h;
        changed = true;
      } else if (f < f_all) {
        f = std::min(f_all, f * 2.0);
        changed = true;
      }
      if (!changed) break;  // interesting set is already every simple path
      flags.params_adjusted = true;
      interesting = detail::interesting_from_env(net, x, y, env, h, f);
    }
  }

  std::vector<Path> sel =
      detail::select_core(net, env.min_paths, interesting, params.k, flags);
  if (static_cast<int>(sel.size()) < params.k) flags.fewer_than_k = true;

  if (disjointness_degree(net, sel) == 1) {
    std::optional<Path> extra = detail::disjoint_extra(net, x, y, sel);
    if (extra) {
      sel.push_back(std::move(*extra));
      sort_paths_canonical(net, sel);
      flags.extra_disjoint_added = true;
    } else {
      flags.no_disjoint_pair_exists = true;
    }
  }

  return detail::make_result(net, x, y, env, std::move(sel), flags, h, f);
}

// Per-pair k override for all-pairs runs (protocols where k varies by pair).
using PairKFn = std::function<int(int, int)>;

struct SelectionReport {
  std::vector<SelectionResult> results;  // ordered by (origin, destination)
  std::vector<double> pair_seconds;      // aligned with results
  std::int64_t total_paths = 0;
  double avg_hop_stretch = 0.0;   // mean over pairs of per-pair mean extra hops
  double avg_cost_stretch = 0.0;  // same for extra cost
  double pct_disjointness_1 = 0.0;
  double pct_disjointness_2 = 0.0;
  double pct_disjointness_3plus = 0.0;
  int pairs_below_k = 0;
  double seconds_total = 0.0;
  double seconds_mean = 0.0;
  double seconds_max = 0.0;
};

inline double pair_avg_hop_stretch(const SelectionResult& r) {
  double sum = 0.0;
  for (const Path& p : r.paths.paths) sum += p.length() - r.optimal_length;
  return r.paths.empty() ? 0.0 : sum / r.paths.size();
}

inline double pair_avg_cost_stretch(const Network& net, const SelectionResult& r) {
  double sum = 0.0;
  for (const Path& p : r.paths.paths) sum += p.cost(net) - r.optimal_cost;
  return r.paths.empty() ? 0.0 : sum / r.paths.size();
}

namespace detail {

inline std::vector<std::pair<int, int>> edge_node_pairs(const Network& net) {
  const std::vector<int>& nodes = net.edge_nodes();
  if (nodes.size() < 2)
    throw ValidationError("all-pairs run needs at least two edge nodes");
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      pairs.emplace_back(nodes[i], nodes[j]);
  return pairs;
}

// Runs fn(i) for i in [0, count) on `jobs` threads. Results land in
// preallocated slots, so the output is identical whatever the interleaving.
template <typename Fn>
inline void parallel_for(int count, int jobs, const Fn& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

inline void finalize_report(const Network& net, SelectionReport& rep,
                            const std::vector<int>& pair_ks) {
  const int pairs = static_cast<int>(rep.results.size());
  double sum_hop = 0.0, sum_cost = 0.0;
  int d1 = 0, d2 = 0, d3 = 0;
  for (int i = 0; i < pairs; ++i) {
    const SelectionResult& r = rep.results[i];
    rep.total_paths += r.paths.size();
    sum_hop += pair_avg_hop_stretch(r);
    sum_cost += pair_avg_cost_stretch(net, r);
    if (r.disjointness <= 1)
      ++d1;
    else if (r.disjointness == 2)
      ++d2;
    else
      ++d3;
    if (r.paths.size() < pair_ks[i]) ++rep.pairs_below_k;
  }
  if (pairs > 0) {
    rep.avg_hop_stretch = sum_hop / pairs;
    rep.avg_cost_stretch = sum_cost / pairs;
    rep.pct_disjointness_1 = 100.0 * d1 / pairs;
    rep.pct_disjointness_2 = 100.0 * d2 / pairs;
    rep.pct_disjointness_3plus = 100.0 * d3 / pairs;
  }
  for (double s : rep.pair_seconds) {
    rep.seconds_total += s;
    rep.seconds_max = std::max(rep.seconds_max, s);
  }
  if (pairs > 0) rep.seconds_mean = rep.seconds_total / pairs;
}

}  // namespace detail

// Runs selection for every ordered edge-node pair (x < y). Uses the adaptive
// variant when params.threshold is set, the plain one otherwise. Results are
// reported in pair order no matter how many worker threads run.
inline SelectionReport select_all_pairs(const Network& net,
                                        const SelectionParams& params,
                                        int jobs = 1,
                                        const PairKFn& pair_k = {}) {
  params.validate();
  std::vector<std::pair<int, int>> pairs = detail::edge_node_pairs(net);
  const int count = static_cast<int>(pairs.size());

  SelectionReport rep;
  rep.results.resize(count);
  rep.pair_seconds.resize(count);
  std::vector<int> pair_ks(count, params.k);

  detail::parallel_for(count, jobs, [&](int i) {
    auto [x, y] = pairs[i];
    SelectionParams p = params;
    if (pair_k) p.k = pair_k(x, y);
    pair_ks[i] = p.k;
    auto t0 = std::chrono::steady_clock::now();
    rep.results[i] = params.threshold ? select_paths_adaptive(net, x, y, p)
                                      : select_paths(net, x, y, p);
    rep.pair_seconds[i] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  });

  detail::finalize_report(net, rep, pair_ks);
  return rep;
}

}  // namespace pathtree
