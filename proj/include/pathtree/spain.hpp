#pragma once

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <random>
#include <vector>

#include "pathtree/bits.hpp"
#include "pathtree/graph.hpp"
#include "pathtree/selection.hpp"

namespace pathtree {

// Greedy multipath selection: repeatedly run a deterministic shortest-path
// computation, then inflate every edge of the found path by the sum of all
// original edge costs. Stops at k paths or as soon as an iteration
// rediscovers an already-selected path, which is why it can return fewer
// than k even when k paths exist. The returned list is in discovery order.
inline std::vector<Path> spain_select_sequence(const Network& net, int x, int y,
                                               int k) {
  check_pair(net, x, y);
  if (k < 1) throw ValidationError("k must be at least 1");
  std::vector<double> weights(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) weights[e] = net.edge(e).weight;
  const double increment = net.total_weight();
  std::vector<Path> selected;
  while (static_cast<int>(selected.size()) < k) {
    std::vector<double> dist = dijkstra_distances(net, x, &weights);
    Path p = shortest_path_from(net, x, y, dist, &weights);
    if (std::find(selected.begin(), selected.end(), p) != selected.end()) break;
    for (int e : p.edge_ids(net)) weights[e] += increment;
    selected.push_back(std::move(p));
  }
  return selected;
}

inline PathSet spain_select(const Network& net, int x, int y, int k) {
  return make_path_set(net, x, y, spain_select_sequence(net, x, y, k));
}

// An acyclic, possibly disconnected subgraph accumulated by the SPAIN
// aggregation heuristic.
struct SpainSubgraph {
  Bits edge_mask;
  std::vector<int> edge_list;  // edge ids, insertion order
};

struct SpainRun {
  std::uint64_t seed = 0;
  std::vector<SpainSubgraph> subgraphs;
  std::int64_t iterations_executed = 0;
  std::int64_t best_iteration = 0;
  int best_size = 0;
};

struct SpainBudget {
  std::int64_t iterations = 0;  // > 0: fixed iteration count
  double seconds = 0.0;         // > 0: process-CPU-time budget
};

namespace detail {

// In-place Fisher–Yates driven by raw 64-bit draws, so shuffles reproduce
// bit-for-bit across standard libraries (std::shuffle's draw pattern is
// unspecified).
inline void fisher_yates(std::vector<int>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

inline double cpu_seconds() {
  return static_cast<double>(std::clock()) / CLOCKS_PER_SEC;
}

}  // namespace detail

// One randomized aggregation pass: walk the paths in a shuffled order; a
// path already covered by some subgraph is skipped; otherwise try the
// subgraphs in a freshly shuffled order and insert the path into the first
// whose union with it stays acyclic; if none fits, open a new subgraph.
inline SpainRun spain_aggregate_once(const Network& net,
                                     const std::vector<Path>& paths,
                                     std::uint64_t seed) {
  for (const Path& p : paths)
    if (!is_simple_network_path(net, p))
      throw ValidationError("aggregation input contains a non-simple path");

  std::mt19937_64 rng(seed);
  const int s = static_cast<int>(paths.size());
  std::vector<Bits> edge_masks = path_edge_masks(net, paths);

  std::vector<int> order(s);
  for (int i = 0; i < s; ++i) order[i] = i;
  detail::fisher_yates(order, rng);

  std::vector<SpainSubgraph> subgraphs;
  EpochDsu dsu(net.node_count());
  auto fits = [&](const SpainSubgraph& g, int path_idx) {
    dsu.begin();
    for (int e : g.edge_list) dsu.unite(net.edge(e).u, net.edge(e).v);
    for (int e : paths[path_idx].edge_ids(net)) {
      if (g.edge_mask.test(e)) continue;
      if (!dsu.unite(net.edge(e).u, net.edge(e).v)) return false;
    }
    return true;
  };

  std::vector<int> scan;
  for (int idx : order) {
    bool covered = false;
    for (const SpainSubgraph& g : subgraphs)
      if (g.edge_mask.contains(edge_masks[idx])) {
        covered = true;
        break;
      }
    if (covered) continue;
    scan.resize(subgraphs.size());
    for (std::size_t i = 0; i < subgraphs.size(); ++i)
      scan[i] = static_cast<int>(i);
    detail::fisher_yates(scan, rng);
    int home = -1;
    for (int g : scan)
      if (fits(subgraphs[g], idx)) {
        home = g;
        break;
      }
    if (home < 0) {
      subgraphs.push_back(SpainSubgraph{Bits(net.edge_count()), {}});
      home = static_cast<int>(subgraphs.size()) - 1;
    }
    SpainSubgraph& g = subgraphs[home];
    for (int e : paths[idx].edge_ids(net))
      if (!g.edge_mask.test(e)) {
        g.edge_mask.set(e);
        g.edge_list.push_back(e);
      }
  }

  SpainRun run;
  run.seed = seed;
  run.subgraphs = std::move(subgraphs);
  run.iterations_executed = 1;
  run.best_size = static_cast<int>(run.subgraphs.size());
  return run;
}

// Repeats spain_aggregate_once with seeds base_seed, base_seed+1, ... and
// keeps the smallest result (ties to the earliest iteration, so the outcome
// is independent of worker interleaving). The budget is either a fixed
// iteration count (reproducible) or a process-CPU-time allowance (the 100x
// convention: a multiple of one timed run); at least one iteration always
// runs.
inline SpainRun spain_aggregate_best(const Network& net,
                                     const std::vector<Path>& paths,
                                     const SpainBudget& budget,
                                     std::uint64_t base_seed, int jobs = 1) {
  if (budget.iterations <= 0 && budget.seconds <= 0.0)
    throw ValidationError("spain budget must include iterations or seconds");

  std::mutex mu;
  SpainRun best;
  std::int64_t executed = 0;
  bool have_best = false;
  auto offer = [&](SpainRun&& run, std::int64_t iteration) {
    std::lock_guard<std::mutex> lock(mu);
    ++executed;
    if (!have_best || run.best_size < best.best_size ||
        (run.best_size == best.best_size && iteration < best.best_iteration)) {
      best = std::move(run);
      best.best_iteration = iteration;
      have_best = true;
    }
  };

  if (budget.iterations > 0) {
    detail::parallel_for(
        static_cast<int>(budget.iterations), jobs, [&](int it) {
          offer(spain_aggregate_once(net, paths, base_seed + it), it);
        });
  } else {
    const double deadline = detail::cpu_seconds() + budget.seconds;
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::int64_t it = next.fetch_add(1);
        bool first = it == 0;
        if (!first && detail::cpu_seconds() >= deadline) return;
        offer(spain_aggregate_once(net, paths, base_seed + it), it);
        if (first && detail::cpu_seconds() >= deadline) return;
      }
    };
    int n_workers = std::max(1, jobs);
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) workers.emplace_back(worker);
    for (std::thread& w : workers) w.join();
  }

  best.iterations_executed = executed;
  return best;
}

// SPAIN selection over every edge-node pair, reported with the same shape as
// select_all_pairs so the two are directly comparable. Effective h/f are not
// meaningful for SPAIN and are reported as 0/1.
inline SelectionReport spain_select_all_pairs(const Network& net, int k,
                                              int jobs = 1,
                                              const PairKFn& pair_k = {}) {
  if (k < 1) throw ValidationError("k must be at least 1");
  std::vector<std::pair<int, int>> pairs = detail::edge_node_pairs(net);
  const int count = static_cast<int>(pairs.size());

  SelectionReport rep;
  rep.results.resize(count);
  rep.pair_seconds.resize(count);
  std::vector<int> pair_ks(count, k);

  detail::parallel_for(count, jobs, [&](int i) {
    auto [x, y] = pairs[i];
    int kk = pair_k ? pair_k(x, y) : k;
    pair_ks[i] = kk;
    auto t0 = std::chrono::steady_clock::now();
    PathSet sel = spain_select(net, x, y, kk);
    PathSet min_paths = enumerate_min_cost_paths(net, x, y);

    SelectionResult r;
    r.origin = x;
    r.destination = y;
    r.optimal_cost = min_paths.paths.front().cost(net);
    r.optimal_length = min_paths.paths.front().length();
    r.disjointness = disjointness_degree(net, sel.paths);
    r.flags.fewer_than_k = sel.size() < kk;
    r.paths = std::move(sel);
    rep.results[i] = std::move(r);
    rep.pair_seconds[i] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  });

  detail::finalize_report(net, rep, pair_ks);
  return rep;
}

}  // namespace pathtree
