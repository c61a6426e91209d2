#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pathtree/aggregation.hpp"
#include "pathtree/graph.hpp"

namespace pathtree {

// Per-switch VLAN port maps: one distinct tag per tree (tag = tree index +
// 1), and under each tag exactly the tree edges incident to the switch,
// identified by the neighbour they lead to.
struct VlanConfig {
  int tree_count = 0;
  std::map<int, std::map<int, std::vector<int>>> ports;  // switch -> tag -> neighbours
};

inline VlanConfig emit_vlan(const Network& net, const std::vector<Tree>& trees) {
  VlanConfig cfg;
  cfg.tree_count = static_cast<int>(trees.size());
  for (int t = 0; t < static_cast<int>(trees.size()); ++t) {
    const int tag = t + 1;
    for (int e : trees[t].edges_sorted()) {
      const Edge& edge = net.edge(e);
      cfg.ports[edge.u][tag].push_back(edge.v);
      cfg.ports[edge.v][tag].push_back(edge.u);
    }
  }
  for (auto& [sw, tags] : cfg.ports)
    for (auto& [tag, neighbours] : tags)
      std::sort(neighbours.begin(), neighbours.end());
  return cfg;
}

// A static route: traffic for base/len leaves through the interface toward
// neighbour `via`.
struct PrefixRoute {
  std::uint32_t base = 0;
  int len = 0;
  int via = -1;
};

struct NodePrefixInfo {
  int node = -1;
  std::uint32_t address = 0;
  std::vector<PrefixRoute> routes;
};

struct TreePrefixPlan {
  int tree_index = -1;
  int root = -1;
  std::uint32_t base = 0;
  int prefix_len = 0;
  std::vector<NodePrefixInfo> nodes;  // sorted by node id
};

struct PrefixPlan {
  std::vector<TreePrefixPlan> trees;
};

// Address-space exhaustion carries the minimal prefix length every tree
// would need, so the caller can report something actionable.
class PrefixSpaceError : public ValidationError {
 public:
  explicit PrefixSpaceError(std::string msg) : ValidationError(std::move(msg)) {}
};

inline std::uint32_t prefix_mask(int len) {
  return len == 0 ? 0u : ~std::uint32_t{0} << (32 - len);
}

inline std::string format_address(std::uint32_t a) {
  return std::to_string(a >> 24) + "." + std::to_string((a >> 16) & 255) + "." +
         std::to_string((a >> 8) & 255) + "." + std::to_string(a & 255);
}

inline std::string format_prefix(std::uint32_t base, int len) {
  return format_address(base) + "/" + std::to_string(len);
}

namespace detail {

// Tree adjacency restricted to the tree's edges, children sorted by id.
inline std::vector<std::vector<int>> tree_adjacency(const Network& net,
                                                    const Tree& t) {
  std::vector<std::vector<int>> adj(net.node_count());
  for (int e : t.edges_sorted()) {
    const Edge& edge = net.edge(e);
    adj[edge.u].push_back(edge.v);
    adj[edge.v].push_back(edge.u);
  }
  for (std::vector<int>& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// Subtree sizes when the tree hangs from `root`.
inline void subtree_sizes(const std::vector<std::vector<int>>& adj, int root,
                          std::vector<int>& size, std::vector<int>& parent) {
  parent[root] = root;
  std::vector<int> order{root};
  for (std::size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    for (int u : adj[v])
      if (u != parent[v]) {
        parent[u] = v;
        order.push_back(u);
      }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    size[*it] = 1;
    for (int u : adj[*it])
      if (parent[u] == *it) size[*it] += size[u];
  }
}

}  // namespace detail

// Root choice when none is given: the node through which the most tree
// paths run (maximum betweenness, computed from the component sizes the
// node's removal leaves behind); ties go to the lowest node id. Minimises
// average depth and so the route-table bulk.
inline int default_root(const Network& net, const Tree& t) {
  std::vector<std::vector<int>> adj = detail::tree_adjacency(net, t);
  std::vector<int> nodes = t.nodes();
  if (nodes.empty()) throw ValidationError("cannot root an empty tree");
  const int total = static_cast<int>(nodes.size());
  int best = nodes.front();
  std::int64_t best_score = -1;
  for (int v : nodes) {
    // removing v splits the tree into one component per incident edge
    std::vector<int> size(net.node_count(), 0), parent(net.node_count(), -1);
    detail::subtree_sizes(adj, v, size, parent);
    std::int64_t score = 0;
    std::int64_t seen = 0;
    for (int u : adj[v]) {
      score += seen * size[u];
      seen += size[u];
    }
    (void)total;
    if (score > best_score) {
      best_score = score;
      best = v;
    }
  }
  return best;
}

// Recursive prefix partition: a node with c children splits its interval
// into 2^ceil(log2(c+1)) equal blocks, keeps block 0 for
// its own address (the block's base), and hands one block to each child
// subtree. Routes: one entry per child (the child's block, via that child)
// and, on every non-root node, the whole tree prefix via the parent, which
// is what makes longest-prefix-match walk the unique tree path: a
// destination outside every child block falls through to the tree prefix
// and climbs; inside one, it descends.
inline PrefixPlan assign_prefixes(const Network& net,
                                  const std::vector<Tree>& trees,
                                  std::vector<int> roots = {}) {
  if (roots.empty()) roots.assign(trees.size(), -1);
  if (roots.size() != trees.size())
    throw ValidationError("one root per tree required");

  // bottom-up address demand of every tree
  std::vector<std::uint64_t> need(trees.size(), 1);
  std::vector<int> chosen_root(trees.size(), -1);
  std::vector<std::vector<std::vector<int>>> adjacencies;
  adjacencies.reserve(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const Tree& tree = trees[t];
    int root = roots[t] < 0 ? default_root(net, tree) : roots[t];
    if (root < 0 || root >= net.node_count() || !tree.node_mask.test(root))
      throw ValidationError("root is not a node of its tree");
    chosen_root[t] = root;
    adjacencies.push_back(detail::tree_adjacency(net, tree));
    const std::vector<std::vector<int>>& adj = adjacencies.back();

    std::vector<int> parent(net.node_count(), -1);
    std::vector<int> order{root};
    parent[root] = root;
    for (std::size_t head = 0; head < order.size(); ++head) {
      int v = order[head];
      for (int u : adj[v])
        if (u != parent[v]) {
          parent[u] = v;
          order.push_back(u);
        }
    }
    std::vector<std::uint64_t> demand(net.node_count(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      std::uint64_t block = 1;
      std::uint64_t children = 0;
      for (int u : adj[v])
        if (u != v && parent[u] == v) {
          ++children;
          block = std::max(block, demand[u]);
        }
      std::uint64_t blocks = std::bit_ceil(children + 1);
      demand[v] = blocks * std::bit_ceil(block);
      // saturate beyond the 32-bit space so deep trees cannot overflow the
      // arithmetic; the slab check below reports the exhaustion
      demand[v] = std::min(demand[v], std::uint64_t{1} << 33);
    }
    need[t] = demand[root];
  }

  // uniform power-of-two slabs keep every prefix aligned
  std::uint64_t slab = 1;
  for (std::uint64_t n : need) slab = std::max(slab, std::bit_ceil(n));
  if (slab * trees.size() > (std::uint64_t{1} << 32)) {
    std::string msg = "address space exhausted; per-tree minimal prefix lengths:";
    for (std::size_t t = 0; t < trees.size(); ++t)
      msg += " tree" + std::to_string(t) + "=/" +
             std::to_string(32 - std::bit_width(std::bit_ceil(need[t]) - 1));
    throw PrefixSpaceError(msg);
  }

  PrefixPlan plan;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::vector<std::vector<int>>& adj = adjacencies[t];
    TreePrefixPlan tp;
    tp.tree_index = static_cast<int>(t);
    tp.root = chosen_root[t];
    tp.base = static_cast<std::uint32_t>(slab * t);
    tp.prefix_len = 32 - std::countr_zero(slab);

    std::map<int, NodePrefixInfo> infos;
    auto assign = [&](auto&& self, int v, int parent, std::uint64_t base,
                      std::uint64_t size) -> void {
      std::vector<int> children;
      for (int u : adj[v])
        if (u != parent) children.push_back(u);
      std::uint64_t blocks = std::bit_ceil(children.size() + 1);
      std::uint64_t block = size / blocks;

      NodePrefixInfo info;
      info.node = v;
      info.address = static_cast<std::uint32_t>(base);
      for (std::size_t c = 0; c < children.size(); ++c) {
        std::uint64_t child_base = base + (c + 1) * block;
        info.routes.push_back(
            PrefixRoute{static_cast<std::uint32_t>(child_base),
                        32 - std::countr_zero(block), children[c]});
        self(self, children[c], v, child_base, block);
      }
      if (parent >= 0)
        info.routes.push_back(PrefixRoute{tp.base, tp.prefix_len, parent});
      infos.emplace(v, std::move(info));
    };
    assign(assign, tp.root, -1, tp.base, slab);

    for (auto& [node, info] : infos) tp.nodes.push_back(std::move(info));
    plan.trees.push_back(std::move(tp));
  }
  return plan;
}

// Walk failure means the plan violates its own invariants.
class LpmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hop-by-hop longest-prefix-match traversal from src toward the owner of
// dst_address. Returns the visited node sequence; just {src} when src owns
// the address.
inline std::vector<int> simulate_lpm_walk(const TreePrefixPlan& plan, int src,
                                          std::uint32_t dst_address) {
  std::map<int, const NodePrefixInfo*> by_node;
  int owner = -1;
  for (const NodePrefixInfo& info : plan.nodes) {
    by_node[info.node] = &info;
    if (info.address == dst_address) owner = info.node;
  }
  if (owner < 0)
    throw ValidationError("destination address " + format_address(dst_address) +
                          " belongs to no node of the tree");
  if (!by_node.count(src))
    throw ValidationError("walk source is not a node of the tree");

  std::vector<int> walk{src};
  int cur = src;
  while (cur != owner) {
    const NodePrefixInfo& info = *by_node.at(cur);
    int best_len = -1, via = -1;
    for (const PrefixRoute& r : info.routes)
      if ((dst_address & prefix_mask(r.len)) == r.base && r.len > best_len) {
        best_len = r.len;
        via = r.via;
      }
    if (via < 0)
      throw LpmError("lookup miss at node " + std::to_string(cur) +
                     " for address " + format_address(dst_address));
    cur = via;
    walk.push_back(cur);
    if (walk.size() > plan.nodes.size())
      throw LpmError("forwarding loop detected for address " +
                     format_address(dst_address));
  }
  return walk;
}

inline std::vector<int> simulate_lpm_walk(const PrefixPlan& plan, int tree_index,
                                          int src, std::uint32_t dst_address) {
  if (tree_index < 0 || tree_index >= static_cast<int>(plan.trees.size()))
    throw ValidationError("tree index out of range");
  return simulate_lpm_walk(plan.trees[tree_index], src, dst_address);
}

}  // namespace pathtree
