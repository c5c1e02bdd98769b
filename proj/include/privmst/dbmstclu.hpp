// Deterministic MST-cut clustering. The forest state tracks clusters as
// connected components of the tree minus the cut edges; the greedy loop
// cuts whichever edge maximizes the partition validity index (DBCVI) until
// no cut improves it.
//
// Definitions, for cluster C with K clusters total over N nodes:
//   dispersion(C) = max edge weight inside C's subtree, 0 for singletons;
//   separation(C) = min weight among cut edges incident to C, 1 when K = 1;
//   validity(C)   = (sep - disp) / max(sep, disp), in [-1, 1];
//   DBCVI         = sum over clusters of (|C| / N) * validity(C).
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "privmst/graph.hpp"

namespace privmst {

struct ClusterMetrics {
  int size = 0;
  double dispersion = 0.0;
  double separation = 1.0;
  double validity = 1.0;
};

struct ClusterIndexReport {
  std::vector<ClusterMetrics> clusters;  // canonical order (see partition())
  double dbcvi = 0.0;
};

// Current forest over a weighted spanning tree. Weights must lie in (0,1].
class ClusteringState {
 public:
  explicit ClusteringState(SpanningTree tree);

  const SpanningTree& tree() const { return tree_; }
  std::span<const EdgeId> cut_edges() const { return cuts_; }
  int cluster_count() const { return static_cast<int>(metrics_.size()); }
  int cluster_of(NodeId v) const { return cluster_of_.at(v); }
  const ClusterMetrics& metrics(int cluster) const { return metrics_.at(cluster - 1); }

  // Definition value of the current partition (maintained incrementally,
  // revalidated against a full recompute in debug builds).
  double dbcvi_value() const { return dbcvi_; }

  bool is_cut(EdgeId e) const;
  double tree_weight(EdgeId e) const;

  // Splits the containing cluster along e; the half holding the smaller
  // endpoint keeps the label, the other half becomes cluster K+1.
  void apply_cut(EdgeId e);

  // Clusters relabeled 1..K by ascending smallest member node.
  NodePartition partition() const;

 private:
  friend double evaluate_cut(const ClusteringState&, EdgeId);
  friend ClusterIndexReport cluster_report(const ClusteringState&);

  struct Split;  // evaluated candidate cut
  Split evaluate_split(EdgeId e) const;

  SpanningTree tree_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> tree_adj_;
  std::vector<char> cut_flag_;   // by parent edge id
  std::vector<EdgeId> cuts_;     // order performed
  std::vector<int> cluster_of_;  // node -> 1..K
  std::vector<ClusterMetrics> metrics_;
  double dbcvi_;
};

// From-definition single-cluster quantities.
double dispersion(const ClusteringState& s, int cluster);
double separation(const ClusteringState& s, int cluster);
double dbcvi(const ClusteringState& s);

// (sep - disp) / max(sep, disp); requires max(sep, disp) > 0.
double validity_index(double disp, double sep);

// DBCVI that would result from additionally cutting the candidate; the
// state is unchanged. Only the split cluster's terms are recomputed (other
// clusters' dispersions and incident cut sets cannot change).
double evaluate_cut(const ClusteringState& s, EdgeId candidate);

ClusterIndexReport cluster_report(const ClusteringState& s);

// Called for every candidate evaluation: (state before cut, edge, value).
using CutObserver =
    std::function<void(const ClusteringState&, EdgeId, double)>;

struct DbmstcluResult {
  ClusteringState state;
  ClusterIndexReport report;
  std::vector<double> dbcvi_sequence;  // value after each performed cut
};

// Greedy loop: starting from dbcvi = -1.0, each round scans the remaining
// uncut edges in ascending edge-id order and keeps the best candidate
// under newDbcvi >= current-best (later ties replace earlier); cuts it if
// one was found, else stops. Also stops once dbcvi reaches 1.0. Rounds are
// structurally bounded by the tree's edge count.
DbmstcluResult run_dbmstclu(const SpanningTree& t,
                            const CutObserver& observer = nullptr);

}  // namespace privmst
