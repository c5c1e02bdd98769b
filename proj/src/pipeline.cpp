#include "privmst/pipeline.hpp"

#include <stdexcept>
#include <string>

#include "privmst/pamst.hpp"
#include "privmst/random.hpp"

namespace privmst {

WeightReleaseParams derive_release_params(double scale_s, double w_pub_max) {
  if (!(scale_s > 0.0))
    throw std::invalid_argument("release params: scale must be positive");
  if (!(w_pub_max > 0.0))
    throw std::invalid_argument("release params: w_pub_max must be positive");
  double tau = 5.0 * scale_s + w_pub_max;
  double p = w_pub_max + 2.0 * tau;
  return WeightReleaseParams{scale_s, tau, p};
}

PtclustResult ptclust(const WeightedGraph& g, const PtclustConfig& config) {
  const GraphTopology& topo = *g.topology;
  if (topo.node_count() < 3)
    throw std::invalid_argument("ptclust: need at least 3 nodes");
  if (!topo.is_connected())
    throw std::runtime_error("ptclust: graph is not connected");
  if (config.tau.has_value() != config.p.has_value())
    throw std::invalid_argument("ptclust: set both tau and p, or neither");

  const double epsilon = config.budget.epsilon;
  const double mu = config.budget.mu;
  const double scale_s = 2.0 * mu / epsilon;
  WeightReleaseParams params =
      config.tau.has_value()
          ? WeightReleaseParams{scale_s, *config.tau, *config.p}
          : derive_release_params(scale_s, config.w_pub_max);

  // One stream drives both stages; consumption order is fixed.
  RandomSource rng(config.seed);

  // Stage 1: topology at epsilon/2.
  PrivacyBudget half(epsilon / 2.0, mu);
  SpanningTree topology = pamst(rng, g, half);

  // Stage 2: weights at epsilon/2 (per-edge Laplace at 2*mu/epsilon).
  std::vector<double> raw;
  raw.reserve(topology.edge_count());
  for (EdgeId e : topology.edges()) raw.push_back(g.weight(e));
  WeightReleaseResult released =
      weight_release(rng, topology.with_weights(std::move(raw)), params);
  if (2 * released.clamp_count >= topology.edge_count())
    throw std::runtime_error(
        "ptclust: " + std::to_string(released.clamp_count) + " of " +
        std::to_string(topology.edge_count()) +
        " sanitized weights were clamped; tau/p are unsuitable for this weight range");

  // Stage 3: deterministic clustering (post-processing).
  DbmstcluResult clustering = run_dbmstclu(released.tree);

  ProvenanceRecord prov;
  prov.seed = config.seed;
  prov.epsilon = epsilon;
  prov.mu = mu;
  prov.tau = params.tau;
  prov.p = params.p;
  prov.scale_s = scale_s;
  prov.budget_pamst = epsilon / 2.0;
  prov.budget_release = epsilon / 2.0;
  prov.clamp_count = released.clamp_count;
  prov.cut_edges.assign(clustering.state.cut_edges().begin(),
                        clustering.state.cut_edges().end());
  prov.dbcvi = clustering.state.dbcvi_value();
  prov.cluster_count = clustering.state.cluster_count();
  NodePartition partition = clustering.state.partition();
  prov.assignment.assign(partition.labels().begin(), partition.labels().end());

  return PtclustResult{std::move(clustering.state), std::move(clustering.report),
                       std::move(clustering.dbcvi_sequence), std::move(prov)};
}

}  // namespace privmst
