// Metrics, bound calculators, Monte Carlo estimators and brute-force
// oracles that turn the guarantees of the private clustering stack into
// runnable checks. The exact-probability routines here are written
// independently of the sampling implementations they audit.
#pragma once

#include <map>
#include <span>
#include <vector>

#include "privmst/datagen.hpp"
#include "privmst/graph.hpp"
#include "privmst/mechanisms.hpp"
#include "privmst/random.hpp"

namespace privmst {

struct AgreementReport {
  bool exact_match = false;          // label-permutation-invariant equality
  double adjusted_rand_index = 0.0;  // standard pair-counting ARI
};

AgreementReport partition_agreement(const NodePartition& a, const NodePartition& b);

// Agreement after dropping every node `found` places in a singleton
// cluster; both partitions are restricted to the kept nodes. An empty or
// single-node remainder scores 0 unless the partitions matched exactly.
AgreementReport partition_agreement_excluding_singletons(const NodePartition& reference,
                                                         const NodePartition& found);

// Restriction of p to the kept nodes (ascending), relabeled 1..K'.
NodePartition restrict_partition(const NodePartition& p, std::span<const NodeId> kept);

enum class BoundVariant {
  // 1 - sum_i (|C_i|-1) exp(-(eps*(alpha_i*max_i - min_i) + ln|E|)
  //                          / (2*delta_u*(|V|-1)))
  theorem_text,
  // 1 - sum_i (|C_i|-1) exp(-eps*(alpha_i*max_i - min_i)
  //                          / (2*delta_u*(|V|-1))) / |E|
  proof_form,
};

struct ClusterBoundInput {
  int cluster = 0;
  int size = 0;
  double alpha_bar = 1.0;
  double max_intra = 0.0;
  double min_intra = 0.0;
  bool alpha_from_enumeration = true;  // false: bounded by w_max/w_min
};

struct BoundReport {
  double bound_value = 0.0;  // <= 1; may be <= 0 (vacuous)
  bool vacuous = false;
  BoundVariant variant = BoundVariant::theorem_text;
  double epsilon = 0.0;
  double delta_u = 0.0;
  int node_count = 0;
  int edge_count = 0;
  std::vector<ClusterBoundInput> clusters;
};

// Lower bound on the probability that the released tree topology has a
// partitioning topology. alpha_bar comes from spanning-tree enumeration on
// small instances, else from the per-cluster max/min intra-weight ratio
// (valid under the sufficient condition, flagged in the report).
BoundReport topology_bound(const PlantedInstance& instance, double epsilon,
                           double delta_u, BoundVariant variant);

struct TrialSummary {
  int trials = 0;
  int successes = 0;
  double frequency = 0.0;
  double std_error = 0.0;     // sqrt(f(1-f)/trials)
  double half_width95 = 0.0;  // 1.96 * std_error
};

// Frequency over trials that the private topology release yields a
// partitioning topology w.r.t. the planted partition; trial i draws from
// rng.split(i).
TrialSummary estimate_topology_probability(const PlantedInstance& instance,
                                           double epsilon, double mu,
                                           int trials, const RandomSource& rng);

struct SeparabilityEstimate {
  TrialSummary preserved;      // sanitized separability frequency
  double chebyshev_bound = 0.0;
  bool vacuous = false;  // E(phi) >= 0: premise s << p, tau violated
  double e_phi = 0.0;
  double v_phi = 0.0;
  long long bound_draws = 0;
};

// Frequency that a cluster stays homogeneously separable by its planted
// cut edge after weight release, against the one-sided Chebyshev bound
// 1 - V(phi) / (V(phi) + E(phi)^2) with
//   phi = (max_j Y_j)^2 - (min_j Z_j) * X_out,  j in [|C|-1],
// Y_j at the max-intra location, Z_j at the min-intra location, X_out at
// the cut-edge location, all Laplace with scale s/p after the affine map.
// E(phi), V(phi) are Monte-Carlo estimates (bound_draws samples).
SeparabilityEstimate estimate_separability_preservation(
    const PlantedInstance& instance, const SpanningTree& tree, int cluster,
    const WeightReleaseParams& params, int trials, const RandomSource& rng,
    long long bound_draws = 100000);

// Literal reading of the cluster definition: |C| > 2 and for every proper
// bipartition C = C1 (+) C2, the set of minimum-path-distance minimizers
// argmin_{z in D \ C1} min_{v in C1} d(z, v) is contained in C2.
// Brute force over all bipartitions; |C| <= 15.
bool check_cluster_definition(const WeightedGraph& g,
                              std::span<const NodeId> d_space,
                              std::span<const NodeId> candidate);

// Exact selection probabilities of the edge exponential mechanism over a
// weight vector (direct normalized form; oracle-side counterpart of the
// sampler).
std::vector<double> exact_selection_probabilities(std::span<const double> range_weights,
                                                  double epsilon_step, double delta_u);

// Max over the perturbation grid (per-edge deltas, all combinations, each
// |delta| <= mu) and outcomes of |log(P_w(r) / P_w'(r))|, computed exactly.
// Range size capped at 6.
double mechanism_privacy_audit(std::span<const double> range_weights,
                               double epsilon_step, double mu,
                               std::span<const double> per_edge_deltas);

// Exact output distribution of the private tree-topology release on a tiny
// graph: map from ascending tree-edge-id vector to probability (start node
// marginalized uniformly). Chain rule over closed-form per-step selection
// probabilities; node count capped at 7.
std::map<std::vector<EdgeId>, double> pamst_exact_distribution(
    const WeightedGraph& g, const PrivacyBudget& budget);

}  // namespace privmst
