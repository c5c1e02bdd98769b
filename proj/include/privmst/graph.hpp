// Weighted-graph core: topology, weight functions, spanning trees, node
// partitions, and the deterministic operations everything else builds on.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace privmst {

using NodeId = int;
using EdgeId = int;

// Public vertex/edge structure. Simple and undirected: pairs are stored
// normalized (u < v), edge ids are dense integers in input order.
class GraphTopology {
 public:
  GraphTopology(int node_count, std::vector<std::pair<NodeId, NodeId>> edge_pairs);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::pair<NodeId, NodeId>& edge(EdgeId id) const { return edges_.at(id); }
  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }

  // Neighbors of u as (v, edge id), ascending edge id.
  std::span<const std::pair<NodeId, EdgeId>> adjacent(NodeId u) const {
    return adjacency_.at(u);
  }

  std::optional<EdgeId> edge_id(NodeId u, NodeId v) const;
  bool is_connected() const;

 private:
  int node_count_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> pair_to_id_;
};

// Private edge -> weight map, dense by edge id. mu is the neighborhood
// radius of the weight function (same units as the weights); two weight
// functions are neighbors when they differ by at most mu on every edge.
struct WeightFunction {
  std::vector<double> values;
  double mu = 0.1;
};

struct WeightedGraph {
  std::shared_ptr<const GraphTopology> topology;
  WeightFunction weights;  // values.size() == topology->edge_count()

  double weight(EdgeId e) const { return weights.values.at(e); }
  double total_weight(std::span<const EdgeId> edge_ids) const;
};

// A spanning tree of a parent topology: exactly |V|-1 edges, acyclic,
// spanning (validated on construction). Weights are optional because the
// private topology-release path emits trees without weights.
class SpanningTree {
 public:
  SpanningTree(std::shared_ptr<const GraphTopology> parent,
               std::vector<EdgeId> tree_edges,
               std::optional<std::vector<double>> tree_weights = std::nullopt);

  const GraphTopology& parent() const { return *parent_; }
  const std::shared_ptr<const GraphTopology>& parent_ptr() const { return parent_; }
  std::span<const EdgeId> edges() const { return edges_; }  // ascending edge id
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_weights() const { return weights_.has_value(); }
  std::span<const double> weights() const;        // parallel to edges()
  double weight_of(EdgeId e) const;               // requires weights
  bool contains_edge(EdgeId e) const;

  SpanningTree with_weights(std::vector<double> tree_weights) const;

 private:
  std::shared_ptr<const GraphTopology> parent_;
  std::vector<EdgeId> edges_;
  std::optional<std::vector<double>> weights_;
};

// Node -> cluster label assignment with contiguous labels 1..K.
class NodePartition {
 public:
  explicit NodePartition(std::vector<int> labels);

  int node_count() const { return static_cast<int>(labels_.size()); }
  int cluster_count() const { return cluster_count_; }
  int label_of(NodeId v) const { return labels_.at(v); }
  std::span<const int> labels() const { return labels_; }

  // Members of each cluster; index c-1 holds cluster c, nodes ascending.
  std::vector<std::vector<NodeId>> members() const;

  bool operator==(const NodePartition& other) const = default;

 private:
  std::vector<int> labels_;
  int cluster_count_;
};

// Induced restriction of a tree to a node subset.
struct TreeFragment {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edge_ids;  // ascending
  std::vector<double> weights;   // parallel to edge_ids; empty if tree unweighted
};

// Prim construction, deterministic: among frontier edges the (weight,
// edge id) lexicographic minimum is taken, starting from node 0.
// Throws on a disconnected graph, naming an unreachable node.
SpanningTree minimum_spanning_tree(const WeightedGraph& g);

// Length of the minimum-total-weight path between u and v; d(u,u) = 0.
double minimum_path_distance(const WeightedGraph& g, NodeId u, NodeId v);

// Tree edges whose endpoints lie in different clusters of p, ascending.
std::vector<EdgeId> cut_set(const SpanningTree& t, const NodePartition& p);

// True iff every cluster pair is crossed by at most one tree edge and the
// crossing pattern connects the K clusters as a tree (|cut| = K-1 and the
// contracted graph is a simple tree). K = 1 is vacuously true.
bool has_partitioning_topology(const SpanningTree& t, const NodePartition& p);

TreeFragment subtree_restriction(const SpanningTree& t, std::span<const NodeId> nodes);

// max weight / min weight of the fragment's edges; requires >= 1 edge and
// positive weights. Zero-edge fragments have no alpha (error); they are
// handled as vacuously separable by is_homogeneously_separable.
double alpha_ratio(const TreeFragment& fragment);

// alpha * max-edge-weight < s_weight, strict; zero-edge fragments: true.
bool is_homogeneously_separable(const TreeFragment& fragment, double s_weight);

// Unique path between two nodes of a tree, as the visited node sequence.
std::vector<NodeId> tree_path(const SpanningTree& t, NodeId from, NodeId to);

}  // namespace privmst
