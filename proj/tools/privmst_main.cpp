// privmst: batch surface over the private-clustering library.
//
//   generate  synthetic instances (circles | moons | planted)
//   cluster   dbmstclu on the MST, or the private ptclust pipeline
//   sweep     (epsilon x seed) grid of ptclust runs, one table row per cell
//   bounds    partitioning-topology lower bounds, both variants
//
// Exit codes: 0 success, 2 usage, 3 data error, 4 infeasible parameters.
// All randomness flows from --seed; outputs are byte-reproducible.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "privmst/analysis.hpp"
#include "privmst/datagen.hpp"
#include "privmst/graph_io.hpp"
#include "privmst/pipeline.hpp"

namespace {

using namespace privmst;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join_ids(std::span<const EdgeId> ids) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ',';
    out << ids[i];
  }
  return out.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  return out;
}

int thread_cap(int cells) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("PRIVMST_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return std::min(threads, std::max(1, cells));
}

struct GenerateArgs {
  std::string shape;
  int n = 0;
  double w_min = 0.1;
  double w_max = 0.3;
  std::uint64_t seed = 0;
  int knn = 8;
  std::vector<int> sizes;
  int intra_degree = 3;
  int inter_edges = 1;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  PlantedInstance inst = [&] {
    if (args.shape == "circles" || args.shape == "moons") {
      if (args.n <= 0) throw usage_error("--n is required for --shape " + args.shape);
      return args.shape == "circles"
                 ? generate_circles(args.seed, args.n, args.w_min, args.w_max, args.knn)
                 : generate_moons(args.seed, args.n, args.w_min, args.w_max, args.knn);
    }
    if (args.sizes.empty())
      throw usage_error("--sizes is required for --shape planted");
    return generate_planted_partition(args.seed, args.sizes, args.intra_degree,
                                      args.inter_edges, args.w_min, args.w_max);
  }();
  save_weighted_graph(args.out + ".edges", inst.graph);
  save_partition(args.out + ".parts", inst.partition);
  if (!inst.positions.empty())
    save_coordinates(args.out + ".coords", inst.positions);
  std::cout << "wrote " << args.out << ".edges (" << inst.graph.topology->node_count()
            << " nodes, " << inst.graph.topology->edge_count() << " edges), "
            << args.out << ".parts"
            << (inst.positions.empty() ? "" : std::string(", ") + args.out + ".coords")
            << "\n";
  return 0;
}

struct ClusterArgs {
  std::string command_echo;
  std::string graph_path;
  std::string planted_path;
  std::string mode;
  std::optional<double> epsilon;
  std::optional<double> mu;
  std::optional<double> tau;
  std::optional<double> p;
  double w_pub_max = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

void write_agreement_lines(std::ofstream& rec, const NodePartition& planted,
                           const NodePartition& found) {
  AgreementReport full = partition_agreement(planted, found);
  AgreementReport excl = partition_agreement_excluding_singletons(planted, found);
  rec << "ari\t" << format_weight(full.adjusted_rand_index) << "\n";
  rec << "exact_match\t" << (full.exact_match ? "true" : "false") << "\n";
  rec << "ari_excluding_singletons\t" << format_weight(excl.adjusted_rand_index)
      << "\n";
}

int run_cluster(const ClusterArgs& args) {
  if (args.mode == "ptclust" && (!args.epsilon || !args.mu))
    throw usage_error("--mode ptclust requires --epsilon and --mu");
  auto started = std::chrono::steady_clock::now();
  WeightedGraph g = load_weighted_graph(args.graph_path, args.mu.value_or(0.1));
  std::optional<NodePartition> planted;
  if (!args.planted_path.empty())
    planted = load_partition(args.planted_path, g.topology->node_count());

  std::ofstream rec = open_out(args.out + ".record");
  rec << "# privmst run record v1\n";
  rec << "command\t" << args.command_echo << "\n";
  rec << "mode\t" << args.mode << "\n";
  rec << "graph\t" << args.graph_path << "\n";

  // Domain violations on loaded data (weights outside (0,1], unsuitable
  // tau/p) are data errors, not usage errors.
  auto as_data_error = [](const std::invalid_argument& e) -> io_error {
    return io_error(e.what());
  };

  NodePartition found({1});
  if (args.mode == "dbmstclu") {
    SpanningTree mst = minimum_spanning_tree(g);
    DbmstcluResult result = [&] {
      try {
        return run_dbmstclu(mst);
      } catch (const std::invalid_argument& e) {
        throw as_data_error(e);
      }
    }();
    found = result.state.partition();
    rec << "k\t" << result.state.cluster_count() << "\n";
    rec << "dbcvi\t" << format_weight(result.state.dbcvi_value()) << "\n";
    rec << "cut_edges\t" << join_ids(result.state.cut_edges()) << "\n";
    std::cout << "dbmstclu: K=" << result.state.cluster_count()
              << " dbcvi=" << format_weight(result.state.dbcvi_value()) << "\n";
  } else {
    PtclustConfig config{PrivacyBudget(*args.epsilon, *args.mu),
                         args.tau, args.p, args.w_pub_max, args.seed};
    PtclustResult result = [&] {
      try {
        return ptclust(g, config);
      } catch (const std::invalid_argument& e) {
        throw as_data_error(e);
      }
    }();
    found = result.state.partition();
    const ProvenanceRecord& prov = result.provenance;
    rec << "seed\t" << prov.seed << "\n";
    rec << "epsilon\t" << format_weight(prov.epsilon) << "\n";
    rec << "mu\t" << format_weight(prov.mu) << "\n";
    rec << "tau\t" << format_weight(prov.tau) << "\n";
    rec << "p\t" << format_weight(prov.p) << "\n";
    rec << "scale_s\t" << format_weight(prov.scale_s) << "\n";
    rec << "budget_pamst\t" << format_weight(prov.budget_pamst) << "\n";
    rec << "budget_release\t" << format_weight(prov.budget_release) << "\n";
    rec << "clamp_count\t" << prov.clamp_count << "\n";
    rec << "k\t" << prov.cluster_count << "\n";
    rec << "dbcvi\t" << format_weight(prov.dbcvi) << "\n";
    rec << "cut_edges\t" << join_ids(prov.cut_edges) << "\n";
    std::cout << "ptclust: K=" << prov.cluster_count
              << " dbcvi=" << format_weight(prov.dbcvi)
              << " clamped=" << prov.clamp_count << "\n";
  }
  if (planted) write_agreement_lines(rec, *planted, found);
  rec << "partition_file\t" << args.out << ".parts\n";
  if (!rec) throw io_error("write failed: " + args.out + ".record");
  save_partition(args.out + ".parts", found);

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cout << "elapsed_ms " << elapsed.count() << "\n";
  return 0;
}

struct SweepArgs {
  std::string command_echo;
  std::string graph_path;
  std::string planted_path;
  std::vector<double> epsilons;
  int seeds_per_eps = 10;
  double mu = 0.1;
  std::optional<double> tau;
  std::optional<double> p;
  double w_pub_max = 1.0;
  std::uint64_t master_seed = 0;
  std::string out;
};

int run_sweep(const SweepArgs& args) {
  if (args.epsilons.empty()) throw usage_error("--epsilons must be non-empty");
  if (args.seeds_per_eps < 1) throw usage_error("--seeds-per-eps must be >= 1");
  WeightedGraph g = load_weighted_graph(args.graph_path, args.mu);
  std::optional<NodePartition> planted;
  if (!args.planted_path.empty())
    planted = load_partition(args.planted_path, g.topology->node_count());

  struct Row {
    double epsilon;
    std::uint64_t seed;
    int k = 0;
    double dbcvi = 0.0;
    int clamp_count = 0;
    double ari = 0.0;
    double ari_excl = 0.0;
    bool failed = false;
    std::string error;
  };
  const int cells = static_cast<int>(args.epsilons.size()) * args.seeds_per_eps;
  std::vector<Row> rows(cells);
  std::atomic<int> next{0};

  auto work = [&] {
    for (;;) {
      int cell = next.fetch_add(1);
      if (cell >= cells) return;
      int ei = cell / args.seeds_per_eps;
      Row& row = rows[cell];
      row.epsilon = args.epsilons[ei];
      row.seed = args.master_seed ^ static_cast<std::uint64_t>(cell);
      try {
        PtclustConfig config{PrivacyBudget(row.epsilon, args.mu),
                             args.tau, args.p, args.w_pub_max, row.seed};
        PtclustResult result = ptclust(g, config);
        row.k = result.provenance.cluster_count;
        row.dbcvi = result.provenance.dbcvi;
        row.clamp_count = result.provenance.clamp_count;
        if (planted) {
          NodePartition found = result.state.partition();
          row.ari = partition_agreement(*planted, found).adjusted_rand_index;
          row.ari_excl =
              partition_agreement_excluding_singletons(*planted, found)
                  .adjusted_rand_index;
        }
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  int threads = thread_cap(cells);
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::ofstream out = open_out(args.out);
  out << "# privmst sweep v1\n";
  out << "# command " << args.command_echo << "\n";
  out << "# graph " << args.graph_path << "\n";
  out << "# mu " << format_weight(args.mu) << "\n";
  out << "# master_seed " << args.master_seed << "\n";
  out << "epsilon\tseed\tk\tdbcvi\tclamp_count\tari\tari_excluding_singletons\terror\n";
  for (const Row& row : rows) {  // cell order: deterministic
    out << format_weight(row.epsilon) << '\t' << row.seed << '\t' << row.k << '\t'
        << format_weight(row.dbcvi) << '\t' << row.clamp_count << '\t'
        << format_weight(row.ari) << '\t' << format_weight(row.ari_excl) << '\t'
        << (row.failed ? row.error : "-") << '\n';
  }
  if (!out) throw io_error("write failed: " + args.out);
  std::cout << "wrote " << args.out << " (" << cells << " rows)\n";
  return 0;
}

struct BoundsArgs {
  std::string command_echo;
  std::string graph_path;
  std::string planted_path;
  double epsilon = 1.0;
  double mu = 0.1;
  std::string out;
};

int run_bounds(const BoundsArgs& args) {
  WeightedGraph g = load_weighted_graph(args.graph_path, args.mu);
  NodePartition planted = load_partition(args.planted_path, g.topology->node_count());
  GenerationParams params;
  params.shape = "loaded";
  params.n = g.topology->node_count();
  PlantedInstance inst{g, planted, {}, params, {}};
  PrivacyBudget budget(args.epsilon, args.mu);
  const double delta_u = 2.0 * args.mu;

  std::ofstream out = open_out(args.out);
  out << "# privmst bounds v1\n";
  out << "# command " << args.command_echo << "\n";
  out << "epsilon\t" << format_weight(args.epsilon) << "\n";
  out << "mu\t" << format_weight(args.mu) << "\n";
  out << "delta_u\t" << format_weight(delta_u) << "\n";
  for (BoundVariant variant : {BoundVariant::theorem_text, BoundVariant::proof_form}) {
    BoundReport report = topology_bound(inst, args.epsilon, delta_u, variant);
    const char* name =
        variant == BoundVariant::theorem_text ? "theorem_text" : "proof_form";
    out << "variant\t" << name << "\tbound\t" << format_weight(report.bound_value)
        << "\tvacuous\t" << (report.vacuous ? "true" : "false") << "\n";
    for (const ClusterBoundInput& c : report.clusters) {
      out << "cluster\t" << c.cluster << "\tsize\t" << c.size << "\talpha_bar\t"
          << format_weight(c.alpha_bar) << "\tmax_intra\t"
          << format_weight(c.max_intra) << "\tmin_intra\t"
          << format_weight(c.min_intra) << "\talpha_enumerated\t"
          << (c.alpha_from_enumeration ? "true" : "false") << "\n";
    }
  }
  if (!out) throw io_error("write failed: " + args.out);
  (void)budget;
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string command_echo;
  for (int i = 0; i < argc; ++i) {
    if (i) command_echo += ' ';
    command_echo += argv[i];
  }

  CLI::App app{"differentially private MST clustering toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("generate", "write a synthetic instance");
  cmd_gen->add_option("--shape", gen.shape, "circles | moons | planted")
      ->required()
      ->check(CLI::IsMember({"circles", "moons", "planted"}));
  cmd_gen->add_option("--n", gen.n, "total node count (circles/moons)");
  cmd_gen->add_option("--wmin", gen.w_min, "min intra-cluster weight");
  cmd_gen->add_option("--wmax", gen.w_max, "max intra-cluster weight");
  cmd_gen->add_option("--seed", gen.seed, "generator seed")->required();
  cmd_gen->add_option("--knn", gen.knn, "candidate neighborhood size");
  cmd_gen->add_option("--sizes", gen.sizes, "cluster sizes (planted)")->delimiter(',');
  cmd_gen->add_option("--intra-degree", gen.intra_degree, "target intra degree (planted)");
  cmd_gen->add_option("--inter-edges", gen.inter_edges, "edges per cluster pair (planted)");
  cmd_gen->add_option("--out", gen.out, "output path prefix")->required();

  ClusterArgs clu;
  CLI::App* cmd_clu = app.add_subcommand("cluster", "cluster a weighted graph");
  cmd_clu->add_option("--graph", clu.graph_path, "edge list file")->required();
  cmd_clu->add_option("--partition", clu.planted_path, "planted partition for ARI");
  cmd_clu->add_option("--mode", clu.mode, "dbmstclu | ptclust")
      ->required()
      ->check(CLI::IsMember({"dbmstclu", "ptclust"}));
  cmd_clu->add_option("--epsilon", clu.epsilon, "privacy degree (ptclust)");
  cmd_clu->add_option("--mu", clu.mu, "weight sensitivity (ptclust)");
  cmd_clu->add_option("--tau", clu.tau, "release shift (default: derived)");
  cmd_clu->add_option("--p", clu.p, "release divisor (default: derived)");
  cmd_clu->add_option("--wpubmax", clu.w_pub_max, "public weight upper bound");
  cmd_clu->add_option("--seed", clu.seed, "pipeline seed (ptclust)");
  cmd_clu->add_option("--out", clu.out, "output path prefix")->required();

  SweepArgs swp;
  CLI::App* cmd_swp = app.add_subcommand("sweep", "ptclust over an epsilon x seed grid");
  cmd_swp->add_option("--graph", swp.graph_path, "edge list file")->required();
  cmd_swp->add_option("--partition", swp.planted_path, "planted partition for ARI");
  cmd_swp->add_option("--epsilons", swp.epsilons, "epsilon list")
      ->required()
      ->delimiter(',');
  cmd_swp->add_option("--seeds-per-eps", swp.seeds_per_eps, "seeds per epsilon");
  cmd_swp->add_option("--mu", swp.mu, "weight sensitivity");
  cmd_swp->add_option("--tau", swp.tau, "release shift (default: derived)");
  cmd_swp->add_option("--p", swp.p, "release divisor (default: derived)");
  cmd_swp->add_option("--wpubmax", swp.w_pub_max, "public weight upper bound");
  cmd_swp->add_option("--seed", swp.master_seed, "master seed");
  cmd_swp->add_option("--out", swp.out, "output table file")->required();

  BoundsArgs bnd;
  CLI::App* cmd_bnd = app.add_subcommand("bounds", "partitioning-topology bounds");
  cmd_bnd->add_option("--graph", bnd.graph_path, "edge list file")->required();
  cmd_bnd->add_option("--partition", bnd.planted_path, "planted partition")->required();
  cmd_bnd->add_option("--epsilon", bnd.epsilon, "privacy degree")->required();
  cmd_bnd->add_option("--mu", bnd.mu, "weight sensitivity");
  cmd_bnd->add_option("--out", bnd.out, "output report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  clu.command_echo = command_echo;
  swp.command_echo = command_echo;
  bnd.command_echo = command_echo;

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_clu->parsed()) return run_cluster(clu);
    if (cmd_swp->parsed()) return run_sweep(swp);
    if (cmd_bnd->parsed()) return run_bounds(bnd);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "infeasible parameters: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
