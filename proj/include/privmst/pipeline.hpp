// End-to-end private clustering: half the budget releases the tree
// topology, the other half sanitizes its weights (Laplace at scale
// 2*mu/epsilon plus affine normalization), and the deterministic MST-cut
// clustering runs on the result (post-processing, no extra budget).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "privmst/dbmstclu.hpp"
#include "privmst/graph.hpp"
#include "privmst/mechanisms.hpp"

namespace privmst {

struct PtclustConfig {
  PrivacyBudget budget;  // total epsilon, mu
  // Normalization parameters; leave both unset to derive them from
  // w_pub_max (see derive_release_params). Setting only one is an error.
  std::optional<double> tau;
  std::optional<double> p;
  double w_pub_max = 1.0;  // public upper bound on raw weights
  std::uint64_t seed = 0;
};

// Default normalization: tau = 5 s + w_pub_max, p = w_pub_max + 2 tau.
// Keeps (w + noise + tau) / p inside (0, 1] except with probability
// < e^-5 per edge when 0 < w <= w_pub_max.
WeightReleaseParams derive_release_params(double scale_s, double w_pub_max);

struct ProvenanceRecord {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  double p = 1.0;
  double scale_s = 0.0;
  double budget_pamst = 0.0;
  double budget_release = 0.0;
  int clamp_count = 0;
  std::vector<EdgeId> cut_edges;
  double dbcvi = 0.0;
  int cluster_count = 0;
  std::vector<int> assignment;  // canonical labels 1..K
};

struct PtclustResult {
  ClusteringState state;
  ClusterIndexReport report;
  std::vector<double> dbcvi_sequence;
  ProvenanceRecord provenance;
};

// Requires a connected graph with >= 3 nodes. Fails hard when at least
// half of the sanitized weights needed clamping (parameters grossly
// unsuitable for the weight range).
PtclustResult ptclust(const WeightedGraph& g, const PtclustConfig& config);

}  // namespace privmst
