// pathtree: path selection, tree aggregation, and forwarding-table emission
// for multipath fabrics. Non-interactive; every subcommand reads a topology,
// writes report artifacts under --out, and prints a one-line summary.

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathtree/aggregation.hpp"
#include "pathtree/fib.hpp"
#include "pathtree/graph.hpp"
#include "pathtree/report.hpp"
#include "pathtree/selection.hpp"
#include "pathtree/spain.hpp"
#include "pathtree/topology.hpp"

namespace pt = pathtree;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

// ---------------------------------------------------------------------------
// Shared option bundles

struct TopoOpts {
  std::string gen;
  std::string file;
  bool prune = false;
};

void add_topo_opts(CLI::App* cmd, TopoOpts& t) {
  CLI::Option* gen = cmd->add_option(
      "--gen", t.gen,
      "generated fabric: full-mesh:N | ring:N | hier:M | clos:N");
  CLI::Option* topo =
      cmd->add_option("--topo", t.file, "topology file")->check(CLI::ExistingFile);
  gen->excludes(topo);
  cmd->add_flag("--prune", t.prune,
                "iteratively drop degree-1 nodes before running");
}

struct LoadedTopo {
  pt::Network net;
  std::optional<pt::RegularSpec> spec;  // set when generated
  std::string name;
};

LoadedTopo load_topo(const TopoOpts& t) {
  if (t.gen.empty() == t.file.empty())
    throw pt::ValidationError("exactly one of --gen and --topo is required");
  if (!t.gen.empty()) {
    std::optional<pt::RegularSpec> spec = pt::parse_regular_spec(t.gen);
    if (!spec)
      throw pt::ValidationError("bad --gen spec '" + t.gen +
                                "' (want full-mesh:N, ring:N, hier:M, clos:N)");
    pt::Network net = pt::generate(*spec);
    if (t.prune) net = pt::prune_degree1(net);
    return {std::move(net), *spec, pt::regular_name(*spec)};
  }
  pt::Network net = pt::load_topology_file(t.file);
  if (t.prune) net = pt::prune_degree1(net);
  return {std::move(net), std::nullopt, fs::path(t.file).stem().string()};
}

fs::path out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PATHTREE_OUT")) return env;
  return ".";
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream f(p);
  if (!f) throw pt::ValidationError("cannot write " + p.string());
  return f;
}

void write_json(const fs::path& dir, const std::string& name,
                const pt::Json& j) {
  std::ofstream f = open_out(dir, name);
  f << j.dump(2) << "\n";
}

pt::SpainBudget parse_budget(const std::string& text, double hundredx_base) {
  pt::SpainBudget b;
  if (text == "100x") {
    if (hundredx_base < 0.0)
      throw pt::ValidationError(
          "--budget 100x needs a measured base run (aggregate/compare only)");
    b.seconds = 100.0 * hundredx_base;
    return b;
  }
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw pt::ValidationError("bad --budget '" + text + "'");
  }
  std::string unit = text.substr(pos);
  if (unit.empty() || unit == "it") {
    if (value < 1.0 || value != static_cast<double>(static_cast<std::int64_t>(value)))
      throw pt::ValidationError("iteration budget must be a positive integer");
    b.iterations = static_cast<std::int64_t>(value);
  } else if (unit == "s") {
    if (value <= 0.0)
      throw pt::ValidationError("time budget must be positive");
    b.seconds = value;
  } else {
    throw pt::ValidationError("bad --budget unit '" + unit +
                              "' (want <N>, <N>it, <X>s, or 100x)");
  }
  return b;
}

double cpu_now() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

// ---------------------------------------------------------------------------
// select

struct SelectOpts {
  TopoOpts topo;
  int k = 1;
  int h = 0;
  double f = 1.0;
  std::optional<int> threshold;
  std::string baseline;  // "" or "spain"
  int jobs = 1;
  std::string out;
};

int run_select(const SelectOpts& o) {
  LoadedTopo t = load_topo(o.topo);
  pt::SelectionReport rep;
  pt::Json config;
  config["command"] = "select";
  config["network"] = t.name;
  config["k"] = o.k;
  if (o.baseline == "spain") {
    rep = pt::spain_select_all_pairs(t.net, o.k, o.jobs);
    config["method"] = "spain";
  } else {
    pt::SelectionParams params;
    params.k = o.k;
    params.h = o.h;
    params.f = o.f;
    params.threshold = o.threshold;
    rep = pt::select_all_pairs(t.net, params, o.jobs);
    config["method"] = o.threshold ? "adaptive" : "fixed";
    config["h"] = o.h;
    config["f"] = o.f;
    if (o.threshold)
      config["threshold"] = *o.threshold;
    else
      config["threshold"] = nullptr;
  }

  fs::path dir = out_dir(o.out);
  {
    std::ofstream f = open_out(dir, "pairs.csv");
    pt::write_pairs_csv(t.net, rep, f);
  }
  {
    std::ofstream f = open_out(dir, "paths.txt");
    pt::write_paths_file(t.net, rep.results, f);
  }
  write_json(dir, "report.json", pt::selection_summary_json(t.net, rep, config));
  write_json(dir, "timings.json", pt::timings_json(rep));

  std::cout << t.name << ": " << rep.results.size() << " pairs, "
            << rep.total_paths << " paths, " << rep.pairs_below_k
            << " pairs below k\n";
  return 0;
}

// ---------------------------------------------------------------------------
// aggregate / compare

struct AggregateOpts {
  TopoOpts topo;
  std::string paths_file;
  bool best_paths = false;
  int k = 0;  // 0: derive from the fabric when possible
  int h = 0;
  double f = 1.0;
  std::optional<int> threshold;
  std::string budget;  // empty: no baseline run
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;
  std::string format = "md";
};

struct PathsInput {
  std::vector<pt::Path> paths;
  int k = 0;  // width used for the (n-1)k reference
  std::string source;
};

PathsInput gather_paths(const LoadedTopo& t, const AggregateOpts& o) {
  PathsInput in;
  const bool has_file = !o.paths_file.empty();
  const bool wants_selection = o.k > 0 && !has_file && !o.best_paths;
  if (static_cast<int>(has_file) + static_cast<int>(o.best_paths) +
          static_cast<int>(wants_selection) !=
      1)
    throw pt::ValidationError(
        "need exactly one paths source: --paths, --best-paths, or --k");
  if (!o.paths_file.empty()) {
    std::ifstream f(o.paths_file);
    if (!f) throw pt::ValidationError("cannot read " + o.paths_file);
    in.paths = pt::read_paths_file(t.net, f);
    in.k = o.k;
    in.source = "file";
    if (in.k <= 0)
      throw pt::ValidationError("--paths input needs --k for the (n-1)k row");
  } else if (o.best_paths) {
    if (!t.spec)
      throw pt::ValidationError("--best-paths requires a generated fabric");
    pt::SelectionReport rep = pt::best_paths_report(*t.spec, t.net, o.jobs);
    for (const pt::SelectionResult& r : rep.results)
      for (const pt::Path& p : r.paths.paths) in.paths.push_back(p);
    in.k = o.k > 0 ? o.k : pt::natural_k(*t.spec);
    in.source = "best-paths";
  } else {
    pt::SelectionParams params;
    params.k = o.k;
    params.h = o.h;
    params.f = o.f;
    params.threshold = o.threshold;
    pt::SelectionReport rep = pt::select_all_pairs(t.net, params, o.jobs);
    for (const pt::SelectionResult& r : rep.results)
      for (const pt::Path& p : r.paths.paths) in.paths.push_back(p);
    in.k = o.k;
    in.source = "selection";
  }
  return in;
}

pt::ComparisonRow build_row(const LoadedTopo& t, const PathsInput& in,
                            const pt::AggregationResult& agg,
                            const std::string& budget, std::uint64_t seed,
                            int jobs, double alg_cpu_seconds,
                            std::optional<pt::SpainRun>* spain_out) {
  pt::ComparisonRow row;
  row.network = t.name;
  row.nodes = t.net.node_count();
  row.edge_nodes = static_cast<int>(t.net.edge_nodes().size());
  row.k = in.k;
  row.paths = static_cast<std::int64_t>(in.paths.size());
  row.min_trees = t.spec ? pt::min_tree_count(*t.spec) : -1;
  row.alg_trees = agg.tree_count();
  row.mtp_trees =
      pt::lsp_mtp_tree_count(static_cast<int>(t.net.edge_nodes().size()), in.k);
  if (!budget.empty()) {
    pt::SpainBudget b = parse_budget(budget, alg_cpu_seconds);
    pt::SpainRun run = pt::spain_aggregate_best(t.net, in.paths, b, seed, jobs);
    row.spain_best = static_cast<int>(run.subgraphs.size());
    row.spain_iterations = run.iterations_executed;
    if (spain_out) *spain_out = std::move(run);
  }
  return row;
}

int run_aggregate(const AggregateOpts& o) {
  LoadedTopo t = load_topo(o.topo);
  PathsInput in = gather_paths(t, o);

  const double cpu0 = cpu_now();
  pt::AggregateOptions agg_opts;
  agg_opts.jobs = o.jobs;
  pt::AggregationResult agg = pt::aggregate(t.net, in.paths, agg_opts);
  const double alg_cpu = cpu_now() - cpu0;

  pt::Json config;
  config["command"] = "aggregate";
  config["network"] = t.name;
  config["paths_source"] = in.source;
  config["k"] = in.k;

  fs::path dir = out_dir(o.out);
  {
    std::ofstream f = open_out(dir, "trees.txt");
    pt::write_trees_file(t.net, agg.trees, f);
  }
  write_json(dir, "aggregation.json", pt::aggregation_json(t.net, agg, config));

  std::optional<pt::SpainRun> spain;
  pt::ComparisonRow row =
      build_row(t, in, agg, o.budget, o.seed, o.jobs, alg_cpu, &spain);
  std::vector<pt::ComparisonRow> rows{row};
  {
    std::ofstream f =
        open_out(dir, o.format == "csv" ? "comparison.csv" : "comparison.md");
    f << (o.format == "csv" ? pt::comparison_csv(rows)
                            : pt::comparison_markdown(rows));
  }
  if (spain) {
    std::ofstream f = open_out(dir, "spain_trees.txt");
    std::vector<pt::Tree> as_trees;  // subgraphs are acyclic: same file shape
    for (const pt::SpainSubgraph& s : spain->subgraphs) {
      pt::Tree tr = pt::empty_tree(t.net);
      for (int e : s.edge_list) {
        tr.edge_mask.set(e);
        tr.edge_list.push_back(e);
        for (int v : {t.net.edge(e).u, t.net.edge(e).v})
          if (!tr.node_mask.test(v)) {
            tr.node_mask.set(v);
            ++tr.node_count;
          }
      }
      as_trees.push_back(std::move(tr));
    }
    pt::write_trees_file(t.net, as_trees, f);
  }

  std::cout << t.name << ": " << in.paths.size() << " paths -> "
            << agg.tree_count() << " trees";
  if (spain)
    std::cout << " (spain best " << spain->subgraphs.size() << " in "
              << spain->iterations_executed << " iterations)";
  std::cout << ", m-t-p " << row.mtp_trees << "\n";
  return 0;
}

int run_compare(const AggregateOpts& o, const std::vector<std::string>& gens) {
  std::vector<pt::ComparisonRow> rows;
  for (const std::string& g : gens) {
    AggregateOpts each = o;
    each.topo.gen = g;
    each.topo.file.clear();
    each.best_paths = true;
    each.k = 0;
    LoadedTopo t = load_topo(each.topo);
    PathsInput in = gather_paths(t, each);
    const double cpu0 = cpu_now();
    pt::AggregateOptions agg_opts;
    agg_opts.jobs = o.jobs;
    pt::AggregationResult agg = pt::aggregate(t.net, in.paths, agg_opts);
    const double alg_cpu = cpu_now() - cpu0;
    rows.push_back(build_row(t, in, agg, o.budget.empty() ? "1000it" : o.budget,
                             o.seed, o.jobs, alg_cpu, nullptr));
  }
  fs::path dir = out_dir(o.out);
  std::string table = o.format == "csv" ? pt::comparison_csv(rows)
                                        : pt::comparison_markdown(rows);
  {
    std::ofstream f =
        open_out(dir, o.format == "csv" ? "comparison.csv" : "comparison.md");
    f << table;
  }
  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------------------
// emit / check-lpm

struct EmitOpts {
  TopoOpts topo;
  std::string trees_file;
  std::string out;
};

int run_emit(const EmitOpts& o) {
  LoadedTopo t = load_topo(o.topo);
  std::ifstream tf(o.trees_file);
  if (!tf) throw pt::ValidationError("cannot read " + o.trees_file);
  std::vector<pt::Tree> trees = pt::read_trees_file(t.net, tf);

  pt::VlanConfig vlan = pt::emit_vlan(t.net, trees);
  pt::PrefixPlan plan = pt::assign_prefixes(t.net, trees);

  fs::path dir = out_dir(o.out);
  write_json(dir, "vlan.json", pt::vlan_json(t.net, vlan));
  {
    std::ofstream f = open_out(dir, "vlan.txt");
    pt::write_vlan_text(t.net, vlan, f);
  }
  write_json(dir, "prefixes.json", pt::prefix_plan_json(t.net, plan));
  {
    std::ofstream f = open_out(dir, "prefixes.txt");
    pt::write_prefix_plan_text(t.net, plan, f);
  }

  // Self-check: a plan this tool emitted must walk correctly, so a failure
  // here is an internal error (LpmError), not a config problem.
  std::int64_t walks = 0;
  for (const pt::TreePrefixPlan& tp : plan.trees)
    for (const pt::NodePrefixInfo& a : tp.nodes)
      for (const pt::NodePrefixInfo& b : tp.nodes) {
        if (a.node == b.node) continue;
        pt::simulate_lpm_walk(tp, a.node, b.address);
        ++walks;
      }

  std::cout << t.name << ": " << trees.size() << " trees -> vlan + prefixes, "
            << walks << " lpm walks ok\n";
  return 0;
}

struct CheckLpmOpts {
  TopoOpts topo;
  std::string trees_file;
  std::string plan_file;
};

int run_check_lpm(const CheckLpmOpts& o) {
  LoadedTopo t = load_topo(o.topo);
  std::ifstream pf(o.plan_file);
  if (!pf) throw pt::ValidationError("cannot read " + o.plan_file);
  pt::Json j;
  try {
    j = pt::Json::parse(pf);
  } catch (const std::exception& e) {
    throw pt::ValidationError(std::string("bad plan json: ") + e.what());
  }
  pt::PrefixPlan plan = pt::prefix_plan_from_json(t.net, j);

  std::optional<std::vector<pt::Tree>> trees;
  if (!o.trees_file.empty()) {
    std::ifstream tf(o.trees_file);
    if (!tf) throw pt::ValidationError("cannot read " + o.trees_file);
    trees = pt::read_trees_file(t.net, tf);
    if (trees->size() != plan.trees.size())
      throw pt::ValidationError("plan has " + std::to_string(plan.trees.size()) +
                                " trees, trees file has " +
                                std::to_string(trees->size()));
  }

  std::int64_t walks = 0, failures = 0;
  for (std::size_t ti = 0; ti < plan.trees.size(); ++ti) {
    const pt::TreePrefixPlan& tp = plan.trees[ti];
    for (const pt::NodePrefixInfo& a : tp.nodes)
      for (const pt::NodePrefixInfo& b : tp.nodes) {
        if (a.node == b.node) continue;
        ++walks;
        std::vector<int> walk;
        try {
          walk = pt::simulate_lpm_walk(tp, a.node, b.address);
        } catch (const pt::LpmError& e) {
          ++failures;
          std::cout << "FAIL tree " << tp.tree_index << " "
                    << t.net.label(a.node) << " -> " << t.net.label(b.node)
                    << ": " << e.what() << "\n";
          continue;
        }
        if (trees) {
          // The walk must also be the unique tree path.
          const pt::Tree& tr = (*trees)[ti];
          for (std::size_t s = 0; s + 1 < walk.size(); ++s) {
            int e = t.net.edge_id(walk[s], walk[s + 1]);
            if (e < 0 || !tr.edge_mask.test(e)) {
              ++failures;
              std::cout << "FAIL tree " << tp.tree_index << " "
                        << t.net.label(a.node) << " -> " << t.net.label(b.node)
                        << ": walk leaves the tree\n";
              break;
            }
          }
        }
      }
  }
  std::cout << walks << " walks, " << failures << " failures\n";
  if (failures > 0)
    throw pt::ValidationError("lpm check failed for " +
                              std::to_string(failures) + " walks");
  return 0;
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  TopoOpts topo;
  std::string out_file;
};

int run_gen(const GenOpts& o) {
  LoadedTopo t = load_topo(o.topo);
  if (o.out_file.empty()) {
    pt::save_topology(t.net, std::cout);
  } else {
    std::ofstream f(o.out_file);
    if (!f) throw pt::ValidationError("cannot write " + o.out_file);
    pt::save_topology(t.net, f);
  }
  std::cerr << t.name << ": " << t.net.node_count() << " nodes, "
            << t.net.edge_count() << " edges, " << t.net.edge_nodes().size()
            << " edge nodes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "path selection, tree aggregation, and forwarding emission for "
      "multipath fabrics"};
  app.require_subcommand(1);
  // The default -h short flag would clash with the --h option below; keep
  // --help only, on the root and every subcommand.
  app.set_help_flag("--help", "print help and exit");

  GenOpts gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "write a topology file");
  cmd_gen->set_help_flag("--help", "print help and exit");
  add_topo_opts(cmd_gen, gen.topo);
  cmd_gen->add_option("-o,--output", gen.out_file, "output file (default stdout)");

  SelectOpts sel;
  CLI::App* cmd_select =
      app.add_subcommand("select", "select k short paths for every pair");
  cmd_select->set_help_flag("--help", "print help and exit");
  add_topo_opts(cmd_select, sel.topo);
  cmd_select->add_option("--k", sel.k, "paths per pair")->required();
  cmd_select->add_option("--h", sel.h, "extra hops allowed over the optimum");
  cmd_select->add_option("--f", sel.f, "cost factor allowed over the optimum")
      ->check(CLI::Range(1.0, 1e9));
  cmd_select->add_option("--threshold", sel.threshold,
                         "search-set cap enabling adaptive h/f adjustment");
  cmd_select->add_option("--baseline", sel.baseline, "baseline selector")
      ->check(CLI::IsMember({"spain"}));
  cmd_select->add_option("--jobs", sel.jobs, "worker threads")
      ->check(CLI::Range(1, 1024));
  cmd_select->add_option("--out", sel.out, "output directory");

  AggregateOpts agg;
  CLI::App* cmd_aggregate =
      app.add_subcommand("aggregate", "aggregate paths into trees");
  cmd_aggregate->set_help_flag("--help", "print help and exit");
  add_topo_opts(cmd_aggregate, agg.topo);
  cmd_aggregate->add_option("--paths", agg.paths_file, "paths file to aggregate")
      ->check(CLI::ExistingFile);
  cmd_aggregate->add_flag("--best-paths", agg.best_paths,
                          "aggregate the fabric's full best-path sets");
  cmd_aggregate->add_option("--k", agg.k, "paths per pair (selection input)");
  cmd_aggregate->add_option("--h", agg.h, "extra hops allowed over the optimum");
  cmd_aggregate->add_option("--f", agg.f, "cost factor allowed over the optimum")
      ->check(CLI::Range(1.0, 1e9));
  cmd_aggregate->add_option("--threshold", agg.threshold, "search-set cap");
  cmd_aggregate->add_option(
      "--budget", agg.budget,
      "also run the randomized baseline: <N> | <N>it | <X>s | 100x");
  cmd_aggregate->add_option("--seed", agg.seed, "baseline base seed");
  cmd_aggregate->add_option("--jobs", agg.jobs, "worker threads")
      ->check(CLI::Range(1, 1024));
  cmd_aggregate->add_option("--out", agg.out, "output directory");
  cmd_aggregate->add_option("--format", agg.format, "comparison format")
      ->check(CLI::IsMember({"md", "csv"}));

  AggregateOpts cmp;
  std::vector<std::string> cmp_gens;
  CLI::App* cmd_compare = app.add_subcommand(
      "compare", "benchmark aggregation methods over generated fabrics");
  cmd_compare->set_help_flag("--help", "print help and exit");
  cmd_compare
      ->add_option("--gen", cmp_gens,
                   "generated fabrics (repeatable): full-mesh:N | ring:N | "
                   "hier:M | clos:N")
      ->required();
  cmd_compare->add_option("--budget", cmp.budget,
                          "baseline budget: <N> | <N>it | <X>s | 100x "
                          "(default 1000it)");
  cmd_compare->add_option("--seed", cmp.seed, "baseline base seed");
  cmd_compare->add_option("--jobs", cmp.jobs, "worker threads")
      ->check(CLI::Range(1, 1024));
  cmd_compare->add_option("--out", cmp.out, "output directory");
  cmd_compare->add_option("--format", cmp.format, "comparison format")
      ->check(CLI::IsMember({"md", "csv"}));

  EmitOpts emit;
  CLI::App* cmd_emit =
      app.add_subcommand("emit", "emit vlan maps and prefix plans for trees");
  cmd_emit->set_help_flag("--help", "print help and exit");
  add_topo_opts(cmd_emit, emit.topo);
  cmd_emit->add_option("--trees", emit.trees_file, "trees file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_emit->add_option("--out", emit.out, "output directory");

  CheckLpmOpts chk;
  CLI::App* cmd_check =
      app.add_subcommand("check-lpm", "verify every walk of a prefix plan");
  cmd_check->set_help_flag("--help", "print help and exit");
  add_topo_opts(cmd_check, chk.topo);
  cmd_check->add_option("--plan", chk.plan_file, "prefix plan json")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_check->add_option("--trees", chk.trees_file,
                        "trees file to verify walks against")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*cmd_gen) return run_gen(gen);
    if (*cmd_select) return run_select(sel);
    if (*cmd_aggregate) return run_aggregate(agg);
    if (*cmd_compare) return run_compare(cmp, cmp_gens);
    if (*cmd_emit) return run_emit(emit);
    if (*cmd_check) return run_check_lpm(chk);
  } catch (const pt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
