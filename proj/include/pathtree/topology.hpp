#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pathtree/graph.hpp"
#include "pathtree/selection.hpp"

namespace pathtree {

// The four regular fabrics with closed-form best-path structure. All edges
// have weight 1 and, except for folded Clos, every node is an edge node.
enum class RegularKind { kFullMesh, kRing, kHierarchical, kFoldedClos };

struct RegularSpec {
  RegularKind kind = RegularKind::kFullMesh;
  // Node count n for mesh/ring/clos; depth parameter m for hierarchical
  // (levels of sizes 2^(m+1), 2^m, ..., 2 from bottom to top).
  int param = 0;
};

inline std::string regular_name(const RegularSpec& spec) {
  switch (spec.kind) {
    case RegularKind::kFullMesh:
      return "full-mesh:" + std::to_string(spec.param);
    case RegularKind::kRing:
      return "ring:" + std::to_string(spec.param);
    case RegularKind::kHierarchical:
      return "hierarchical:" + std::to_string(spec.param);
    case RegularKind::kFoldedClos:
      return "folded-clos:" + std::to_string(spec.param);
  }
  return "";
}

// Parses "full-mesh:12", "ring:12", "hierarchical:2" (alias "hier:2"),
// "folded-clos:6" (alias "clos:6").
inline std::optional<RegularSpec> parse_regular_spec(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string kind = text.substr(0, colon);
  int param = 0;
  auto [ptr, ec] = std::from_chars(text.data() + colon + 1,
                                   text.data() + text.size(), param);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  RegularSpec spec;
  spec.param = param;
  if (kind == "full-mesh" || kind == "mesh")
    spec.kind = RegularKind::kFullMesh;
  else if (kind == "ring")
    spec.kind = RegularKind::kRing;
  else if (kind == "hierarchical" || kind == "hier")
    spec.kind = RegularKind::kHierarchical;
  else if (kind == "folded-clos" || kind == "clos")
    spec.kind = RegularKind::kFoldedClos;
  else
    return std::nullopt;
  return spec;
}

namespace detail {

// Hierarchical fabric layout. Level 0 (bottom) has 2^(m+1) nodes, each level
// above halves, the top has 2. Node ids are assigned level by level from the
// bottom; within a level, groups of four consecutive nodes share the same
// two parents, so every non-top node has exactly two parents.
struct HierLayout {
  int m = 0;
  std::vector<int> level_size;
  std::vector<int> level_offset;

  explicit HierLayout(int m_in) : m(m_in) {
    int off = 0;
    for (int level = 0; level <= m; ++level) {
      int size = 1 << (m + 1 - level);
      level_size.push_back(size);
      level_offset.push_back(off);
      off += size;
    }
  }

  int total_nodes() const { return level_offset.back() + level_size.back(); }
  int leaves() const { return level_size[0]; }

  // Parents of the i-th node (local index) of `level`, as local indices of
  // level+1.
  std::pair<int, int> parents(int /*level*/, int i) const {
    return {2 * (i / 4), 2 * (i / 4) + 1};
  }
};

}  // namespace detail

inline void validate_regular_spec(const RegularSpec& spec) {
  switch (spec.kind) {
    case RegularKind::kFullMesh:
    case RegularKind::kRing:
      if (spec.param < 3) throw ValidationError("mesh and ring need n >= 3");
      break;
    case RegularKind::kFoldedClos:
      if (spec.param < 2) throw ValidationError("folded clos needs n >= 2");
      break;
    case RegularKind::kHierarchical:
      if (spec.param < 1 || spec.param > 6)
        throw ValidationError("hierarchical depth m must be in 1..6");
      break;
  }
}

inline Network generate(const RegularSpec& spec) {
  validate_regular_spec(spec);
  std::vector<EdgeSpec> edges;
  std::vector<int> edge_nodes;
  switch (spec.kind) {
    case RegularKind::kFullMesh: {
      int n = spec.param;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
      for (int i = 0; i < n; ++i) edge_nodes.push_back(i);
      return Network(n, edges, edge_nodes);
    }
    case RegularKind::kRing: {
      int n = spec.param;
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
      for (int i = 0; i < n; ++i) edge_nodes.push_back(i);
      return Network(n, edges, edge_nodes);
    }
    case RegularKind::kFoldedClos: {
      // complete bipartite: n lower switches (the edge nodes), n upper
      int n = spec.param;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) edges.push_back({i, n + j, 1.0});
      for (int i = 0; i < n; ++i) edge_nodes.push_back(i);
      return Network(2 * n, edges, edge_nodes);
    }
    case RegularKind::kHierarchical: {
      detail::HierLayout layout(spec.param);
      for (int level = 0; level < layout.m; ++level)
        for (int i = 0; i < layout.level_size[level]; ++i) {
          auto [p1, p2] = layout.parents(level, i);
          int child = layout.level_offset[level] + i;
          edges.push_back({child, layout.level_offset[level + 1] + p1, 1.0});
          edges.push_back({child, layout.level_offset[level + 1] + p2, 1.0});
        }
      for (int i = 0; i < layout.leaves(); ++i) edge_nodes.push_back(i);
      return Network(layout.total_nodes(), edges, edge_nodes);
    }
  }
  throw ValidationError("unknown regular kind");
}

// Closed-form best paths of a regular fabric, independent of the generic
// search: mesh pairs get the direct hop plus all two-hop detours, ring pairs
// the two arcs, clos pairs one path per spine, hierarchical pairs every
// shortest up-then-down route (valley-free by construction). `net` must be
// generate(spec).
inline PathSet best_paths(const RegularSpec& spec, const Network& net, int x,
                          int y) {
  validate_regular_spec(spec);
  check_pair(net, x, y);
  std::vector<Path> paths;
  switch (spec.kind) {
    case RegularKind::kFullMesh: {
      paths.emplace_back(Path{{x, y}});
      for (int v = 0; v < net.node_count(); ++v)
        if (v != x && v != y) paths.emplace_back(Path{{x, v, y}});
      break;
    }
    case RegularKind::kRing: {
      int n = net.node_count();
      std::vector<int> cw{x}, ccw{x};
      for (int v = (x + 1) % n; v != y; v = (v + 1) % n) cw.push_back(v);
      cw.push_back(y);
      for (int v = (x - 1 + n) % n; v != y; v = (v - 1 + n) % n)
        ccw.push_back(v);
      ccw.push_back(y);
      paths.emplace_back(Path{std::move(cw)});
      paths.emplace_back(Path{std::move(ccw)});
      break;
    }
    case RegularKind::kFoldedClos: {
      int n = spec.param;
      for (int j = 0; j < n; ++j) paths.emplace_back(Path{{x, n + j, y}});
      break;
    }
    case RegularKind::kHierarchical: {
      // Enumerate the shortest-path DAG by strictly decreasing BFS distance
      // to y; with unit weights these are exactly the minimum-cost paths.
      std::vector<int> hops = bfs_hops(net, y);
      std::vector<int> cur{x};
      auto rec = [&](auto&& self, int v) -> void {
        if (v == y) {
          paths.emplace_back(Path{cur});
          return;
        }
        for (const AdjEntry& a : net.adj(v))
          if (hops[a.to] == hops[v] - 1) {
            cur.push_back(a.to);
            self(self, a.to);
            cur.pop_back();
          }
      };
      rec(rec, x);
      break;
    }
  }
  return make_path_set(net, x, y, std::move(paths));
}

// Selection width that recovers every best path of the fabric: the largest
// number of best paths any edge-node pair has.
inline int natural_k(const RegularSpec& spec) {
  validate_regular_spec(spec);
  switch (spec.kind) {
    case RegularKind::kFullMesh:
      return spec.param - 1;
    case RegularKind::kRing:
      return 2;
    case RegularKind::kFoldedClos:
      return spec.param;
    case RegularKind::kHierarchical:
      return 1 << (2 * spec.param - 1);
  }
  throw ValidationError("unknown regular kind");
}

// Least number of trees that can carry all best paths of the fabric. Known
// for the fabrics below; hierarchical depths other than 2 and 3 have no
// established value.
inline int min_tree_count(const RegularSpec& spec) {
  validate_regular_spec(spec);
  switch (spec.kind) {
    case RegularKind::kFullMesh:
    case RegularKind::kRing:
    case RegularKind::kFoldedClos:
      return spec.param;
    case RegularKind::kHierarchical:
      if (spec.param == 2) return 8;
      if (spec.param == 3) return 32;
      throw ValidationError("min tree count known only for depths 2 and 3");
  }
  throw ValidationError("unknown regular kind");
}

// ---------------------------------------------------------------------------
// Topology files
//
//   # comment
//   node <id> [edge]
//   edge <id1> <id2> <weight>
//
// Node ids are free-form whitespace-free labels and must be declared before
// any edge uses them; "edge" after the id marks an edge node. Weights are
// positive decimals.

class TopologyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace detail {

inline std::string location(int line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

}  // namespace detail

inline Network load_topology(std::istream& in) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  std::vector<EdgeSpec> edges;
  std::vector<int> edge_nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tok(line);
    std::string word;
    if (!(tok >> word) || word[0] == '#') continue;
    if (word == "node") {
      std::string id, tag;
      if (!(tok >> id))
        throw TopologyError(detail::location(line_no) + "node needs an id");
      if (!index.emplace(id, static_cast<int>(labels.size())).second)
        throw TopologyError(detail::location(line_no) + "duplicate node " + id);
      if (tok >> tag) {
        if (tag != "edge")
          throw TopologyError(detail::location(line_no) +
                              "unexpected token '" + tag + "'");
        edge_nodes.push_back(static_cast<int>(labels.size()));
      }
      labels.push_back(id);
      if (tok >> tag)
        throw TopologyError(detail::location(line_no) + "trailing tokens");
    } else if (word == "edge") {
      std::string a, b, w;
      if (!(tok >> a >> b >> w))
        throw TopologyError(detail::location(line_no) +
                            "edge needs two nodes and a weight");
      auto ia = index.find(a), ib = index.find(b);
      if (ia == index.end())
        throw TopologyError(detail::location(line_no) + "unknown node " + a);
      if (ib == index.end())
        throw TopologyError(detail::location(line_no) + "unknown node " + b);
      double weight = 0.0;
      auto [ptr, ec] =
          std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc{} || ptr != w.data() + w.size())
        throw TopologyError(detail::location(line_no) + "bad weight '" + w + "'");
      std::string extra;
      if (tok >> extra)
        throw TopologyError(detail::location(line_no) + "trailing tokens");
      edges.push_back({ia->second, ib->second, weight});
    } else {
      throw TopologyError(detail::location(line_no) + "unknown directive '" +
                          word + "'");
    }
  }
  try {
    return Network(static_cast<int>(labels.size()), edges, edge_nodes, labels);
  } catch (const ValidationError& e) {
    throw TopologyError(std::string("invalid topology: ") + e.what());
  }
}

inline Network load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file " + path);
  return load_topology(in);
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline void save_topology(const Network& net, std::ostream& out) {
  for (int v = 0; v < net.node_count(); ++v) {
    out << "node " << net.label(v);
    if (net.is_edge_node(v)) out << " edge";
    out << "\n";
  }
  for (const Edge& e : net.edges())
    out << "edge " << net.label(e.u) << " " << net.label(e.v) << " "
        << format_double(e.weight) << "\n";
}

// Iteratively strips degree-1 nodes: they can never lie on a simple path
// between two other nodes, so dropping them (standard preprocessing for
// backbone topologies) changes no selection result between surviving edge
// nodes.
// Surviving nodes keep their labels; edge nodes are the original ones that
// survive. Idempotent.
inline Network prune_degree1(const Network& net) {
  int n = net.node_count();
  std::vector<int> degree(n, 0);
  for (const Edge& e : net.edges()) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<char> removed(n, 0);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) queue.push_back(v);
  int remaining = n;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    if (removed[v] || degree[v] != 1 || remaining <= 2) continue;
    removed[v] = 1;
    --remaining;
    for (const AdjEntry& a : net.adj(v)) {
      if (removed[a.to]) continue;
      if (--degree[a.to] == 1) queue.push_back(a.to);
    }
    degree[v] = 0;
  }
  std::vector<int> remap(n, -1);
  std::vector<std::string> labels;
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (!removed[v]) {
      remap[v] = next++;
      labels.push_back(net.label(v));
    }
  std::vector<EdgeSpec> edges;
  for (const Edge& e : net.edges())
    if (!removed[e.u] && !removed[e.v])
      edges.push_back({remap[e.u], remap[e.v], e.weight});
  std::vector<int> edge_nodes;
  for (int v : net.edge_nodes())
    if (!removed[v]) edge_nodes.push_back(remap[v]);
  if (edge_nodes.empty())
    throw TopologyError("pruning removed every edge node");
  return Network(next, edges, edge_nodes, labels);
}

// All-pairs report built from the closed-form best-path sets instead of a
// selection run. Shapes match select_all_pairs so the same writers apply.
inline SelectionReport best_paths_report(const RegularSpec& spec,
                                         const Network& net, int jobs = 1) {
  std::vector<std::pair<int, int>> pairs = detail::edge_node_pairs(net);
  const int count = static_cast<int>(pairs.size());
  SelectionReport rep;
  rep.results.resize(count);
  rep.pair_seconds.assign(count, 0.0);
  std::vector<int> pair_ks(count, 0);
  detail::parallel_for(count, jobs, [&](int i) {
    auto [x, y] = pairs[i];
    SelectionResult r;
    r.origin = x;
    r.destination = y;
    r.paths = best_paths(spec, net, x, y);
    r.disjointness = disjointness_degree(net, r.paths.paths);
    r.optimal_length = r.paths.paths.front().length();
    r.optimal_cost = r.paths.paths.front().cost(net);
    r.effective_h = 0;
    r.effective_f = 1.0;
    rep.results[i] = std::move(r);
  });
  for (int i = 0; i < count; ++i)
    pair_ks[i] = static_cast<int>(rep.results[i].paths.size());
  detail::finalize_report(net, rep, pair_ks);
  return rep;
}

}  // namespace pathtree
