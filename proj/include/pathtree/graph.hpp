#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pathtree {

// Tolerance for float cost comparisons (equality of path costs, bound
// checks). Weight sums at the scales this library works with are exact to
// far better than this, so the slack only absorbs representation noise.
inline constexpr double kCostTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool approx_le(double a, double b) { return a <= b + kCostTol; }
inline bool approx_eq(double a, double b) { return std::fabs(a - b) <= kCostTol; }

// Malformed user input: bad graph, bad file, bad parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EdgeSpec {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

// Canonical stored edge: u < v. Edge id is the index in Network::edges(),
// which is sorted by (u, v).
struct Edge {
  int u;
  int v;
  double weight;
};

struct AdjEntry {
  int to;
  int edge;
  double weight;
};

// Undirected, simple, connected, positively weighted graph plus the set of
// edge nodes (the only nodes that originate or sink traffic). Immutable
// after construction; every free function on it is pure, so concurrent use
// from many threads is safe.
class Network {
 public:
  Network(int node_count, const std::vector<EdgeSpec>& edge_specs,
          std::vector<int> edge_nodes, std::vector<std::string> labels = {})
      : n_(node_count),
        labels_(std::move(labels)),
        edge_nodes_(std::move(edge_nodes)) {
    if (n_ <= 0) throw ValidationError("network needs at least one node");
    if (labels_.empty()) {
      labels_.reserve(n_);
      for (int i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != n_)
      throw ValidationError("label count does not match node count");
    for (int i = 0; i < n_; ++i) {
      if (labels_[i].empty()) throw ValidationError("empty node label");
      if (!label_index_.emplace(labels_[i], i).second)
        throw ValidationError("duplicate node label: " + labels_[i]);
    }

    edges_.reserve(edge_specs.size());
    for (const EdgeSpec& e : edge_specs) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw ValidationError("edge endpoint out of range");
      if (e.u == e.v) throw ValidationError("self-loop on node " + labels_[e.u]);
      if (!std::isfinite(e.weight) || e.weight <= 0.0)
        throw ValidationError("edge weight must be finite and positive");
      edges_.push_back(Edge{std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
        throw ValidationError("parallel edge " + labels_[edges_[i].u] + "-" +
                              labels_[edges_[i].v]);

    adj_.assign(n_, {});
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
      const Edge& e = edges_[id];
      adj_[e.u].push_back(AdjEntry{e.v, id, e.weight});
      adj_[e.v].push_back(AdjEntry{e.u, id, e.weight});
      edge_index_.emplace(edge_key(e.u, e.v), id);
      total_weight_ += e.weight;
    }
    for (std::vector<AdjEntry>& a : adj_)
      std::sort(a.begin(), a.end(),
                [](const AdjEntry& x, const AdjEntry& y) { return x.to < y.to; });

    if (edge_nodes_.empty()) throw ValidationError("edge-node set must not be empty");
    std::sort(edge_nodes_.begin(), edge_nodes_.end());
    edge_nodes_.erase(std::unique(edge_nodes_.begin(), edge_nodes_.end()),
                      edge_nodes_.end());
    for (int v : edge_nodes_)
      if (v < 0 || v >= n_) throw ValidationError("edge node out of range");
    is_edge_node_.assign(n_, 0);
    for (int v : edge_nodes_) is_edge_node_[v] = 1;

    check_connected();
  }

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }
  const std::vector<AdjEntry>& adj(int v) const { return adj_[v]; }
  const std::vector<int>& edge_nodes() const { return edge_nodes_; }
  bool is_edge_node(int v) const { return is_edge_node_[v] != 0; }
  double total_weight() const { return total_weight_; }
  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }

  int edge_id(int u, int v) const {
    auto it = edge_index_.find(edge_key(std::min(u, v), std::max(u, v)));
    return it == edge_index_.end() ? -1 : it->second;
  }

  std::optional<int> find_node(const std::string& label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::uint64_t edge_key(int u, int v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  }

  void check_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const AdjEntry& a : adj_[v])
        if (!seen[a.to]) {
          seen[a.to] = 1;
          ++reached;
          stack.push_back(a.to);
        }
    }
    if (reached != n_) throw ValidationError("network is not connected");
  }

  int n_;
  std::vector<std::string> labels_;
  std::vector<int> edge_nodes_;
  std::vector<char> is_edge_node_;
  std::vector<Edge> edges_;
  std::vector<std::vector<AdjEntry>> adj_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::unordered_map<std::string, int> label_index_;
  double total_weight_ = 0.0;
};

// A path is its node sequence. Cost and edge ids are derived against a
// network on demand.
struct Path {
  std::vector<int> nodes;

  Path() = default;
  explicit Path(std::vector<int> ns) : nodes(std::move(ns)) {}

  int length() const { return static_cast<int>(nodes.size()) - 1; }
  int origin() const { return nodes.front(); }
  int destination() const { return nodes.back(); }

  double cost(const Network& net) const {
    double c = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      int id = net.edge_id(nodes[i - 1], nodes[i]);
      if (id < 0) throw ValidationError("path uses a non-existent edge");
      c += net.edge(id).weight;
    }
    return c;
  }

  std::vector<int> edge_ids(const Network& net) const {
    std::vector<int> ids;
    ids.reserve(nodes.size() - 1);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      int id = net.edge_id(nodes[i - 1], nodes[i]);
      if (id < 0) throw ValidationError("path uses a non-existent edge");
      ids.push_back(id);
    }
    return ids;
  }

  friend bool operator==(const Path&, const Path&) = default;
};

// At least one edge, every hop an existing edge, no repeated node.
inline bool is_simple_network_path(const Network& net, const Path& p) {
  if (p.nodes.size() < 2) return false;
  std::vector<char> seen(net.node_count(), 0);
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    int v = p.nodes[i];
    if (v < 0 || v >= net.node_count() || seen[v]) return false;
    seen[v] = 1;
    if (i > 0 && net.edge_id(p.nodes[i - 1], v) < 0) return false;
  }
  return true;
}

// Canonical path order: cost, then hop count, then lexicographic node
// sequence. Total order on simple paths of one network; every container in
// this library keeps paths sorted by it so runs are reproducible.
inline bool canonical_less(const Network& net, const Path& a, const Path& b) {
  double ca = a.cost(net), cb = b.cost(net);
  if (ca != cb) return ca < cb;
  if (a.length() != b.length()) return a.length() < b.length();
  return a.nodes < b.nodes;
}

inline void sort_paths_canonical(const Network& net, std::vector<Path>& paths) {
  std::vector<double> cost(paths.size());
  std::vector<int> idx(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    cost[i] = paths[i].cost(net);
    idx[i] = static_cast<int>(i);
  }
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (cost[i] != cost[j]) return cost[i] < cost[j];
    if (paths[i].length() != paths[j].length())
      return paths[i].length() < paths[j].length();
    return paths[i].nodes < paths[j].nodes;
  });
  std::vector<Path> out;
  out.reserve(paths.size());
  for (int i : idx) out.push_back(std::move(paths[i]));
  paths = std::move(out);
}

inline void sort_unique_canonical(const Network& net, std::vector<Path>& paths) {
  sort_paths_canonical(net, paths);
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
}

// Distinct paths between one node pair, kept in canonical order.
struct PathSet {
  int origin = -1;
  int destination = -1;
  std::vector<Path> paths;

  int size() const { return static_cast<int>(paths.size()); }
  bool empty() const { return paths.empty(); }
};

inline PathSet make_path_set(const Network& net, int origin, int destination,
                             std::vector<Path> paths) {
  for (const Path& p : paths) {
    if (!is_simple_network_path(net, p))
      throw ValidationError("path set contains a non-simple path");
    if (p.origin() != origin || p.destination() != destination)
      throw ValidationError("path endpoints do not match the pair");
  }
  sort_unique_canonical(net, paths);
  return PathSet{origin, destination, std::move(paths)};
}

// Shortest-path distances from src. `weights`, when given, overrides the
// per-edge weights (indexed by edge id); a non-finite override disables the
// edge entirely.
inline std::vector<double> dijkstra_distances(
    const Network& net, int src, const std::vector<double>* weights = nullptr) {
  std::vector<double> dist(net.node_count(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const AdjEntry& a : net.adj(v)) {
      double w = weights ? (*weights)[a.edge] : a.weight;
      if (!std::isfinite(w)) continue;
      double nd = d + w;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

// Deterministic witness for the distances from x: starting at y, repeatedly
// step to the neighbour minimising dist[u] + w(u, v), breaking near-ties
// (within kCostTol) toward the lowest node index. Positive weights make the
// walk strictly decreasing in dist, so it terminates and is simple.
inline Path shortest_path_from(const Network& net, int x, int y,
                               const std::vector<double>& dist_from_x,
                               const std::vector<double>* weights = nullptr) {
  if (!std::isfinite(dist_from_x[y]))
    throw std::logic_error("no path exists for shortest-path witness");
  std::vector<int> rev{y};
  int v = y;
  while (v != x) {
    int best = -1;
    double best_val = kInf;
    for (const AdjEntry& a : net.adj(v)) {
      double w = weights ? (*weights)[a.edge] : a.weight;
      if (!std::isfinite(w)) continue;
      double val = dist_from_x[a.to] + w;
      if (best < 0 || val < best_val - kCostTol) {
        best = a.to;
        best_val = val;
      }
    }
    if (best < 0) throw std::logic_error("shortest-path witness walk got stuck");
    v = best;
    rev.push_back(v);
  }
  std::reverse(rev.begin(), rev.end());
  return Path{std::move(rev)};
}

// Minimum cost from x to y and one deterministic witness path.
inline std::pair<double, Path> min_cost(const Network& net, int x, int y) {
  std::vector<double> dist = dijkstra_distances(net, x);
  Path p = shortest_path_from(net, x, y, dist);
  return {dist[y], std::move(p)};
}

inline std::vector<int> bfs_hops(const Network& net, int src) {
  std::vector<int> hops(net.node_count(), -1);
  std::vector<int> queue{src};
  hops[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (const AdjEntry& a : net.adj(v))
      if (hops[a.to] < 0) {
        hops[a.to] = hops[v] + 1;
        queue.push_back(a.to);
      }
  }
  return hops;
}

// All simple x→y paths with cost ≤ cost_bound (tolerance-inclusive) and hop
// count ≤ length_bound, in canonical order. Depth-first search over node-
// sorted adjacency; a prefix is cut as soon as even its best completion
// (Dijkstra distance / BFS hop count to y, both admissible) would break a
// bound. Precomputed dist_to_y / hops_to_y must come from dijkstra_distances
// (net, y) and bfs_hops(net, y).
inline std::vector<Path> bounded_simple_paths(const Network& net, int x, int y,
                                              double cost_bound, int length_bound,
                                              const std::vector<double>& dist_to_y,
                                              const std::vector<int>& hops_to_y) {
  std::vector<Path> out;
  std::vector<int> cur{x};
  std::vector<char> used(net.node_count(), 0);
  used[x] = 1;
  auto rec = [&](auto&& self, int v, double c) -> void {
    if (v == y) {
      // a simple path can only touch y once, at its end
      out.emplace_back(Path{cur});
      return;
    }
    for (const AdjEntry& a : net.adj(v)) {
      if (used[a.to]) continue;
      int hops_done = static_cast<int>(cur.size());  // edges after taking a
      if (hops_done + hops_to_y[a.to] > length_bound) continue;
      double nc = c + a.weight;
      if (!approx_le(nc + dist_to_y[a.to], cost_bound)) continue;
      used[a.to] = 1;
      cur.push_back(a.to);
      self(self, a.to, nc);
      cur.pop_back();
      used[a.to] = 0;
    }
  };
  if (approx_le(dist_to_y[x], cost_bound) && hops_to_y[x] <= length_bound)
    rec(rec, x, 0.0);
  sort_paths_canonical(net, out);
  return out;
}

inline std::vector<Path> bounded_simple_paths(const Network& net, int x, int y,
                                              double cost_bound, int length_bound) {
  std::vector<double> dist_to_y = dijkstra_distances(net, y);
  std::vector<int> hops_to_y = bfs_hops(net, y);
  return bounded_simple_paths(net, x, y, cost_bound, length_bound, dist_to_y,
                              hops_to_y);
}

inline void check_pair(const Network& net, int x, int y) {
  if (x < 0 || x >= net.node_count() || y < 0 || y >= net.node_count())
    throw ValidationError("node out of range");
  if (x == y) throw ValidationError("origin and destination must differ");
}

// All minimum-cost x→y paths. Canonical order puts the optimal path (fewest
// hops among minimum-cost, then lexicographic) at the front.
inline PathSet enumerate_min_cost_paths(const Network& net, int x, int y) {
  check_pair(net, x, y);
  std::vector<double> dist_to_y = dijkstra_distances(net, y);
  std::vector<int> hops_to_y = bfs_hops(net, y);
  std::vector<Path> paths = bounded_simple_paths(
      net, x, y, dist_to_y[x], net.node_count() - 1, dist_to_y, hops_to_y);
  return PathSet{x, y, std::move(paths)};
}

// Interesting paths for slack h (extra hops over the optimal path) and
// factor f (cost multiple of the optimal cost), always including every
// minimum-cost path.
inline PathSet enumerate_interesting_paths(const Network& net, int x, int y,
                                           int h, double f) {
  check_pair(net, x, y);
  if (h < 0) throw ValidationError("h must be non-negative");
  if (f < 1.0) throw ValidationError("f must be at least 1");
  std::vector<double> dist_to_y = dijkstra_distances(net, y);
  std::vector<int> hops_to_y = bfs_hops(net, y);
  std::vector<Path> min_paths = bounded_simple_paths(
      net, x, y, dist_to_y[x], net.node_count() - 1, dist_to_y, hops_to_y);
  const Path& opt = min_paths.front();
  std::vector<Path> near = bounded_simple_paths(
      net, x, y, f * dist_to_y[x], opt.length() + h, dist_to_y, hops_to_y);
  near.insert(near.end(), min_paths.begin(), min_paths.end());
  sort_unique_canonical(net, near);
  return PathSet{x, y, std::move(near)};
}

}  // namespace pathtree
