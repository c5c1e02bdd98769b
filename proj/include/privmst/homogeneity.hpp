// Homogeneity checks over spanning-tree ensembles, plus small-graph
// spanning-tree enumeration used as the brute-force backend.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "privmst/graph.hpp"

namespace privmst {

// Number of spanning trees via the matrix-tree theorem (long double
// Gaussian elimination; exact enough to guard enumeration at small sizes).
double count_spanning_trees(const GraphTopology& g);

// Visits every spanning tree as an ascending edge-id vector. Intended for
// small graphs; callers enforce size caps.
void for_each_spanning_tree(
    const GraphTopology& g,
    const std::function<void(std::span<const EdgeId>)>& visit);

struct ClusterHomogeneity {
  int cluster = 0;
  bool holds = true;
  // max over enumerated trees of (fragment max / fragment min).
  double alpha_bar = 1.0;
  // min over (tree, incident cut edge) of w(cut) - alpha * fragment max;
  // +inf when no cut edge was ever incident.
  double margin = std::numeric_limits<double>::infinity();
};

struct HomogeneityReport {
  std::vector<ClusterHomogeneity> clusters;  // index c-1 holds cluster c
  bool all_hold = true;
  long long trees_checked = 0;
};

// Strong homogeneity: for every spanning tree of g and every inter-cluster
// tree edge incident to a cluster, the cluster's fragment is homogeneously
// separable by that edge. Enumeration is capped at max_nodes (default 10);
// larger graphs are refused and directed to check_sufficient_homogeneity.
HomogeneityReport check_strong_homogeneity(const WeightedGraph& g,
                                           const NodePartition& p,
                                           int max_nodes = 10);

// Same check quantified over minimum spanning trees only.
HomogeneityReport check_weak_homogeneity(const WeightedGraph& g,
                                         const NodePartition& p,
                                         int max_nodes = 10);

struct SufficientHomogeneityReport {
  bool holds = false;
  // min inter-cluster weight minus the largest per-cluster threshold
  // max_intra^2 / min_intra.
  double margin = 0.0;
  std::vector<double> cluster_thresholds;  // index c-1
  double min_inter_weight = std::numeric_limits<double>::infinity();
};

// Constructive sufficient condition: every inter-cluster edge strictly
// outweighs max_intra^2 / min_intra of each incident cluster (bounds taken
// per cluster from the data). Implies strong homogeneity.
SufficientHomogeneityReport check_sufficient_homogeneity(const WeightedGraph& g,
                                                         const NodePartition& p);

}  // namespace privmst
