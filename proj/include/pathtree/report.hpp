#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathtree/aggregation.hpp"
#include "pathtree/fib.hpp"
#include "pathtree/selection.hpp"
#include "pathtree/spain.hpp"
#include "pathtree/topology.hpp"

namespace pathtree {

// Insertion-ordered JSON keeps every emitted document byte-stable.
using Json = nlohmann::ordered_json;

inline std::string flags_to_string(const SelectionFlags& f) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ";";
    out += name;
  };
  add(f.fewer_than_k, "fewer_than_k");
  add(f.params_adjusted, "params_adjusted");
  add(f.extra_disjoint_added, "extra_disjoint_added");
  add(f.no_disjoint_pair_exists, "no_disjoint_pair_exists");
  return out.empty() ? "-" : out;
}

// ---------------------------------------------------------------------------
// Selection reports

inline void write_pairs_csv(const Network& net, const SelectionReport& rep,
                            std::ostream& out) {
  out << "origin,destination,paths,disjointness,optimal_length,optimal_cost,"
         "avg_hop_stretch,avg_cost_stretch,effective_h,effective_f,flags\n";
  for (const SelectionResult& r : rep.results) {
    out << net.label(r.origin) << "," << net.label(r.destination) << ","
        << r.paths.size() << "," << r.disjointness << "," << r.optimal_length
        << "," << format_double(r.optimal_cost) << ","
        << format_double(pair_avg_hop_stretch(r)) << ","
        << format_double(pair_avg_cost_stretch(net, r)) << "," << r.effective_h
        << "," << format_double(r.effective_f) << "," << flags_to_string(r.flags)
        << "\n";
  }
}

inline Json selection_summary_json(const Network& net,
                                   const SelectionReport& rep,
                                   const Json& config) {
  int adjusted = 0, extra = 0, no_disjoint = 0, fewer = 0;
  for (const SelectionResult& r : rep.results) {
    adjusted += r.flags.params_adjusted;
    extra += r.flags.extra_disjoint_added;
    no_disjoint += r.flags.no_disjoint_pair_exists;
    fewer += r.flags.fewer_than_k;
  }
  Json j;
  j["config"] = config;
  j["network"] = {{"nodes", net.node_count()},
                  {"edges", net.edge_count()},
                  {"edge_nodes", net.edge_nodes().size()},
                  {"pairs", rep.results.size()}};
  j["totals"] = {{"paths", rep.total_paths},
                 {"pairs_below_k", rep.pairs_below_k}};
  j["stretch"] = {{"avg_hops", rep.avg_hop_stretch},
                  {"avg_cost", rep.avg_cost_stretch}};
  j["disjointness_pct"] = {{"deg_1", rep.pct_disjointness_1},
                           {"deg_2", rep.pct_disjointness_2},
                           {"deg_3_plus", rep.pct_disjointness_3plus}};
  j["flags"] = {{"fewer_than_k", fewer},
                {"params_adjusted", adjusted},
                {"extra_disjoint_added", extra},
                {"no_disjoint_pair_exists", no_disjoint}};
  return j;
}

// Wall-clock data lives in its own document: every other artifact of a run
// is byte-stable across reruns, timings by nature are not.
inline Json timings_json(const SelectionReport& rep) {
  Json j;
  j["seconds_total"] = rep.seconds_total;
  j["seconds_mean_per_pair"] = rep.seconds_mean;
  j["seconds_max_per_pair"] = rep.seconds_max;
  return j;
}

// ---------------------------------------------------------------------------
// Path files
//
//   # comment
//   path <label> <label> ...
//
// One path per line, at least two labels, consecutive labels joined by a
// network edge.

inline void write_paths_file(const Network& net,
                             const std::vector<SelectionResult>& results,
                             std::ostream& out) {
  for (const SelectionResult& r : results)
    for (const Path& p : r.paths.paths) {
      out << "path";
      for (int v : p.nodes) out << " " << net.label(v);
      out << "\n";
    }
}

inline std::vector<Path> read_paths_file(const Network& net, std::istream& in) {
  std::vector<Path> paths;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tok(line);
    std::string word;
    if (!(tok >> word) || word[0] == '#') continue;
    if (word != "path")
      throw ValidationError("paths file line " + std::to_string(line_no) +
                            ": unknown directive '" + word + "'");
    std::vector<int> nodes;
    std::string label;
    while (tok >> label) {
      std::optional<int> v = net.find_node(label);
      if (!v)
        throw ValidationError("paths file line " + std::to_string(line_no) +
                              ": unknown node " + label);
      nodes.push_back(*v);
    }
    Path p{std::move(nodes)};
    if (!is_simple_network_path(net, p))
      throw ValidationError("paths file line " + std::to_string(line_no) +
                            ": not a simple network path");
    paths.push_back(std::move(p));
  }
  return paths;
}

// ---------------------------------------------------------------------------
// Tree files
//
//   tree <index>
//   edge <label> <label>
//   ...
//
// Edges belong to the most recent tree directive. Each tree must be a
// connected acyclic subgraph.

inline void write_trees_file(const Network& net, const std::vector<Tree>& trees,
                             std::ostream& out) {
  for (std::size_t t = 0; t < trees.size(); ++t) {
    out << "tree " << t << "\n";
    for (int e : trees[t].edges_sorted())
      out << "edge " << net.label(net.edge(e).u) << " "
          << net.label(net.edge(e).v) << "\n";
  }
}

inline std::vector<Tree> read_trees_file(const Network& net, std::istream& in) {
  std::vector<Tree> trees;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tok(line);
    std::string word;
    if (!(tok >> word) || word[0] == '#') continue;
    if (word == "tree") {
      trees.push_back(empty_tree(net));
    } else if (word == "edge") {
      if (trees.empty())
        throw ValidationError("trees file line " + std::to_string(line_no) +
                              ": edge before any tree directive");
      std::string a, b;
      if (!(tok >> a >> b))
        throw ValidationError("trees file line " + std::to_string(line_no) +
                              ": edge needs two nodes");
      std::optional<int> ia = net.find_node(a), ib = net.find_node(b);
      if (!ia || !ib)
        throw ValidationError("trees file line " + std::to_string(line_no) +
                              ": unknown node");
      int e = net.edge_id(*ia, *ib);
      if (e < 0)
        throw ValidationError("trees file line " + std::to_string(line_no) +
                              ": no such network edge " + a + "-" + b);
      Tree& t = trees.back();
      if (t.edge_mask.test(e))
        throw ValidationError("trees file line " + std::to_string(line_no) +
                              ": duplicate edge");
      t.edge_mask.set(e);
      t.edge_list.push_back(e);
      for (int v : {*ia, *ib})
        if (!t.node_mask.test(v)) {
          t.node_mask.set(v);
          ++t.node_count;
        }
    } else {
      throw ValidationError("trees file line " + std::to_string(line_no) +
                            ": unknown directive '" + word + "'");
    }
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    try {
      validate_tree(net, trees[t]);
    } catch (const std::logic_error& e) {
      throw ValidationError("trees file: tree " + std::to_string(t) +
                            " is not a tree (" + e.what() + ")");
    }
  }
  return trees;
}

// ---------------------------------------------------------------------------
// Aggregation report

inline Json aggregation_json(const Network& net, const AggregationResult& result,
                             const Json& config) {
  Json sizes = Json::array();
  for (const Tree& t : result.trees)
    sizes.push_back(Json{{"nodes", t.node_count}, {"edges", t.edge_count()}});
  Json j;
  j["config"] = config;
  j["network"] = {{"nodes", net.node_count()}, {"edges", net.edge_count()}};
  j["input_paths"] = result.cover.size();
  j["trees"] = result.tree_count();
  j["tree_sizes"] = sizes;
  j["phase_log"] = {
      {"compatible_pairs", result.log.compatible_pairs},
      {"pairs_both_covered", result.log.pairs_both_covered},
      {"pairs_inserted_into_tree", result.log.pairs_inserted_into_tree},
      {"pairs_started_tree", result.log.pairs_started_tree},
      {"one_covered_into_covering_tree",
       result.log.one_covered_into_covering_tree},
      {"one_covered_into_best_tree", result.log.one_covered_into_best_tree},
      {"one_covered_postponed", result.log.one_covered_postponed},
      {"singles_total", result.log.singles_total},
      {"singles_already_covered", result.log.singles_already_covered},
      {"singles_inserted_into_tree", result.log.singles_inserted_into_tree},
      {"singles_started_tree", result.log.singles_started_tree}};
  j["cover"] = result.cover;
  return j;
}

// ---------------------------------------------------------------------------
// Comparison rows (aggregation quality across methods)

struct ComparisonRow {
  std::string network;
  int nodes = 0;
  int edge_nodes = 0;
  int k = 0;
  std::int64_t paths = 0;
  int min_trees = -1;  // -1: unknown
  int alg_trees = 0;
  int spain_best = 0;
  std::int64_t spain_iterations = 0;
  std::int64_t mtp_trees = 0;
};

inline std::string comparison_markdown(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "| network | n | k | paths | min trees | trees | spain best "
         "(iterations) | lsp m-t-p |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const ComparisonRow& r : rows) {
    out << "| " << r.network << " | " << r.edge_nodes << " | " << r.k << " | "
        << r.paths << " | ";
    if (r.min_trees >= 0)
      out << r.min_trees;
    else
      out << "unknown";
    out << " | " << r.alg_trees << " | " << r.spain_best << " ("
        << r.spain_iterations << ") | " << r.mtp_trees << " |\n";
  }
  return out.str();
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "network,edge_nodes,k,paths,min_trees,trees,spain_best,"
         "spain_iterations,mtp_trees\n";
  for (const ComparisonRow& r : rows) {
    out << r.network << "," << r.edge_nodes << "," << r.k << "," << r.paths
        << ",";
    if (r.min_trees >= 0) out << r.min_trees;
    out << "," << r.alg_trees << "," << r.spain_best << ","
        << r.spain_iterations << "," << r.mtp_trees << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// VLAN and prefix artifacts

inline Json vlan_json(const Network& net, const VlanConfig& cfg) {
  Json switches = Json::array();
  for (const auto& [sw, tags] : cfg.ports) {
    Json jtags = Json::array();
    for (const auto& [tag, neighbours] : tags) {
      Json ports = Json::array();
      for (int v : neighbours) ports.push_back(net.label(v));
      jtags.push_back(Json{{"tag", tag}, {"ports", ports}});
    }
    switches.push_back(Json{{"switch", net.label(sw)}, {"tags", jtags}});
  }
  Json j;
  j["tree_count"] = cfg.tree_count;
  j["switches"] = switches;
  return j;
}

inline void write_vlan_text(const Network& net, const VlanConfig& cfg,
                            std::ostream& out) {
  out << "# vlan port maps: " << cfg.tree_count << " trees\n";
  for (const auto& [sw, tags] : cfg.ports) {
    out << "switch " << net.label(sw) << "\n";
    for (const auto& [tag, neighbours] : tags) {
      out << "  vlan " << tag << " ports";
      for (int v : neighbours) out << " " << net.label(v);
      out << "\n";
    }
  }
}

inline Json prefix_plan_json(const Network& net, const PrefixPlan& plan) {
  Json jtrees = Json::array();
  for (const TreePrefixPlan& tp : plan.trees) {
    Json jnodes = Json::array();
    for (const NodePrefixInfo& info : tp.nodes) {
      Json routes = Json::array();
      for (const PrefixRoute& r : info.routes)
        routes.push_back(Json{{"prefix", format_prefix(r.base, r.len)},
                              {"via", net.label(r.via)}});
      jnodes.push_back(Json{{"node", net.label(info.node)},
                            {"address", format_address(info.address)},
                            {"routes", routes}});
    }
    jtrees.push_back(Json{{"tree", tp.tree_index},
                          {"root", net.label(tp.root)},
                          {"prefix", format_prefix(tp.base, tp.prefix_len)},
                          {"nodes", jnodes}});
  }
  Json j;
  j["trees"] = jtrees;
  return j;
}

inline void write_prefix_plan_text(const Network& net, const PrefixPlan& plan,
                                   std::ostream& out) {
  out << "# prefix plans: " << plan.trees.size() << " trees\n";
  for (const TreePrefixPlan& tp : plan.trees) {
    out << "tree " << tp.tree_index << " root " << net.label(tp.root)
        << " prefix " << format_prefix(tp.base, tp.prefix_len) << "\n";
    for (const NodePrefixInfo& info : tp.nodes) {
      out << "  node " << net.label(info.node) << " address "
          << format_address(info.address) << "\n";
      for (const PrefixRoute& r : info.routes)
        out << "    route " << format_prefix(r.base, r.len) << " via "
            << net.label(r.via) << "\n";
    }
  }
}

inline std::uint32_t parse_address(const std::string& text) {
  std::uint32_t parts[4];
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t dot = i < 3 ? text.find('.', pos) : text.size();
    if (dot == std::string::npos)
      throw ValidationError("bad address " + text);
    unsigned long v = std::stoul(text.substr(pos, dot - pos));
    if (v > 255) throw ValidationError("bad address " + text);
    parts[i] = static_cast<std::uint32_t>(v);
    pos = dot + 1;
  }
  return (parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3];
}

inline std::pair<std::uint32_t, int> parse_prefix(const std::string& text) {
  std::size_t slash = text.find('/');
  if (slash == std::string::npos)
    throw ValidationError("bad prefix " + text);
  std::uint32_t base = parse_address(text.substr(0, slash));
  int len = std::stoi(text.substr(slash + 1));
  if (len < 0 || len > 32) throw ValidationError("bad prefix length in " + text);
  return {base, len};
}

inline PrefixPlan prefix_plan_from_json(const Network& net, const Json& j) {
  PrefixPlan plan;
  for (const Json& jt : j.at("trees")) {
    TreePrefixPlan tp;
    tp.tree_index = jt.at("tree").get<int>();
    std::optional<int> root = net.find_node(jt.at("root").get<std::string>());
    if (!root) throw ValidationError("prefix plan: unknown root node");
    tp.root = *root;
    auto [base, len] = parse_prefix(jt.at("prefix").get<std::string>());
    tp.base = base;
    tp.prefix_len = len;
    for (const Json& jn : jt.at("nodes")) {
      NodePrefixInfo info;
      std::optional<int> node = net.find_node(jn.at("node").get<std::string>());
      if (!node) throw ValidationError("prefix plan: unknown node");
      info.node = *node;
      info.address = parse_address(jn.at("address").get<std::string>());
      for (const Json& jr : jn.at("routes")) {
        PrefixRoute r;
        auto [rb, rl] = parse_prefix(jr.at("prefix").get<std::string>());
        r.base = rb;
        r.len = rl;
        std::optional<int> via = net.find_node(jr.at("via").get<std::string>());
        if (!via) throw ValidationError("prefix plan: unknown via node");
        r.via = *via;
        info.routes.push_back(r);
      }
      tp.nodes.push_back(std::move(info));
    }
    plan.trees.push_back(std::move(tp));
  }
  return plan;
}

}  // namespace pathtree
