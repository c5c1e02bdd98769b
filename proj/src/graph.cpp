#include "privmst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace privmst {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

// Union-find, path halving + union by size.
class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace

GraphTopology::GraphTopology(int node_count,
                             std::vector<std::pair<NodeId, NodeId>> edge_pairs)
    : node_count_(node_count), edges_(std::move(edge_pairs)) {
  if (node_count_ <= 0)
    throw std::invalid_argument("graph: node count must be positive");
  adjacency_.resize(node_count_);
  pair_to_id_.reserve(edges_.size() * 2);
  for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id) {
    auto& [u, v] = edges_[id];
    if (u < 0 || u >= node_count_ || v < 0 || v >= node_count_)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (u == v)
      throw std::invalid_argument("graph: self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!pair_to_id_.emplace(pair_key(u, v), id).second)
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(u) +
                                  ", " + std::to_string(v) + ")");
    adjacency_[u].emplace_back(v, id);
    adjacency_[v].emplace_back(u, id);
  }
}

std::optional<EdgeId> GraphTopology::edge_id(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  auto it = pair_to_id_.find(pair_key(u, v));
  if (it == pair_to_id_.end()) return std::nullopt;
  return it->second;
}

bool GraphTopology::is_connected() const {
  std::vector<char> seen(node_count_, 0);
  std::vector<NodeId> stack = {0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (const auto& [v, id] : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == node_count_;
}

double WeightedGraph::total_weight(std::span<const EdgeId> edge_ids) const {
  double total = 0.0;
  for (EdgeId e : edge_ids) total += weight(e);
  return total;
}

SpanningTree::SpanningTree(std::shared_ptr<const GraphTopology> parent,
                           std::vector<EdgeId> tree_edges,
                           std::optional<std::vector<double>> tree_weights)
    : parent_(std::move(parent)),
      edges_(std::move(tree_edges)),
      weights_(std::move(tree_weights)) {
  if (!parent_) throw std::invalid_argument("spanning tree: null parent topology");
  const int n = parent_->node_count();
  if (static_cast<int>(edges_.size()) != n - 1)
    throw std::invalid_argument("spanning tree: expected " + std::to_string(n - 1) +
                                " edges, got " + std::to_string(edges_.size()));
  // Weights were supplied parallel to the given edge order; keep the pairing
  // while sorting ids.
  if (weights_ && weights_->size() != edges_.size())
    throw std::invalid_argument("spanning tree: weight count mismatch");
  if (weights_) {
    std::vector<int> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return edges_[a] < edges_[b]; });
    std::vector<EdgeId> se(edges_.size());
    std::vector<double> sw(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      se[i] = edges_[order[i]];
      sw[i] = (*weights_)[order[i]];
    }
    edges_ = std::move(se);
    weights_ = std::move(sw);
  } else {
    std::sort(edges_.begin(), edges_.end());
  }
  DisjointSet dsu(n);
  for (EdgeId e : edges_) {
    if (e < 0 || e >= parent_->edge_count())
      throw std::invalid_argument("spanning tree: unknown edge id " + std::to_string(e));
    const auto& [u, v] = parent_->edge(e);
    if (!dsu.unite(u, v))
      throw std::invalid_argument("spanning tree: edges contain a cycle");
  }
  // n-1 acyclic edges on n nodes necessarily span.
}

std::span<const double> SpanningTree::weights() const {
  if (!weights_) throw std::logic_error("spanning tree carries no weights");
  return *weights_;
}

double SpanningTree::weight_of(EdgeId e) const {
  if (!weights_) throw std::logic_error("spanning tree carries no weights");
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e)
    throw std::invalid_argument("edge " + std::to_string(e) + " is not a tree edge");
  return (*weights_)[static_cast<std::size_t>(it - edges_.begin())];
}

bool SpanningTree::contains_edge(EdgeId e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

SpanningTree SpanningTree::with_weights(std::vector<double> tree_weights) const {
  return SpanningTree(parent_, edges_, std::move(tree_weights));
}

NodePartition::NodePartition(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("partition: empty");
  cluster_count_ = *std::max_element(labels_.begin(), labels_.end());
  std::vector<char> used(cluster_count_ + 1, 0);
  for (int l : labels_) {
    if (l < 1 || l > cluster_count_)
      throw std::invalid_argument("partition: label " + std::to_string(l) +
                                  " outside 1.." + std::to_string(cluster_count_));
    used[l] = 1;
  }
  for (int c = 1; c <= cluster_count_; ++c)
    if (!used[c])
      throw std::invalid_argument("partition: labels not contiguous, missing " +
                                  std::to_string(c));
}

std::vector<std::vector<NodeId>> NodePartition::members() const {
  std::vector<std::vector<NodeId>> out(cluster_count_);
  for (NodeId v = 0; v < node_count(); ++v) out[labels_[v] - 1].push_back(v);
  return out;
}

SpanningTree minimum_spanning_tree(const WeightedGraph& g) {
  const GraphTopology& topo = *g.topology;
  const int n = topo.node_count();
  if (static_cast<int>(g.weights.values.size()) != topo.edge_count())
    throw std::invalid_argument("mst: weight vector does not match topology");

  std::vector<char> in_tree(n, 0);
  // (weight, edge id) keyed min-heap; smallest edge id wins ties.
  using Entry = std::pair<double, EdgeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<EdgeId> chosen;
  std::vector<double> chosen_w;
  chosen.reserve(n - 1);

  auto push_edges = [&](NodeId u) {
    for (const auto& [v, id] : topo.adjacent(u))
      if (!in_tree[v]) heap.emplace(g.weight(id), id);
  };
  in_tree[0] = 1;
  push_edges(0);
  while (static_cast<int>(chosen.size()) < n - 1) {
    EdgeId pick = -1;
    while (!heap.empty()) {
      auto [w, id] = heap.top();
      heap.pop();
      const auto& [a, b] = topo.edge(id);
      if (in_tree[a] != in_tree[b]) {
        pick = id;
        break;
      }
    }
    if (pick < 0) {
      for (NodeId v = 0; v < n; ++v)
        if (!in_tree[v])
          throw std::runtime_error("mst: graph is disconnected, node " +
                                   std::to_string(v) + " unreachable");
      throw std::logic_error("mst: frontier exhausted on a connected graph");
    }
    const auto& [a, b] = topo.edge(pick);
    NodeId fresh = in_tree[a] ? b : a;
    in_tree[fresh] = 1;
    chosen.push_back(pick);
    chosen_w.push_back(g.weight(pick));
    push_edges(fresh);
  }
  return SpanningTree(g.topology, std::move(chosen), std::move(chosen_w));
}

double minimum_path_distance(const WeightedGraph& g, NodeId u, NodeId v) {
  const GraphTopology& topo = *g.topology;
  const int n = topo.node_count();
  if (u < 0 || u >= n || v < 0 || v >= n)
    throw std::invalid_argument("path distance: node out of range");
  for (double w : g.weights.values)
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("path distance: weights must be finite and nonnegative");
  if (u == v) return 0.0;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  dist[u] = 0.0;
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0.0, u);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    if (x == v) return d;
    for (const auto& [y, id] : topo.adjacent(x)) {
      double nd = d + g.weight(id);
      if (nd < dist[y]) {
        dist[y] = nd;
        heap.emplace(nd, y);
      }
    }
  }
  throw std::runtime_error("path distance: no path between " + std::to_string(u) +
                           " and " + std::to_string(v));
}

std::vector<EdgeId> cut_set(const SpanningTree& t, const NodePartition& p) {
  if (p.node_count() != t.parent().node_count())
    throw std::invalid_argument("cut set: partition does not cover the tree's nodes");
  std::vector<EdgeId> cuts;
  for (EdgeId e : t.edges()) {
    const auto& [u, v] = t.parent().edge(e);
    if (p.label_of(u) != p.label_of(v)) cuts.push_back(e);
  }
  return cuts;
}

bool has_partitioning_topology(const SpanningTree& t, const NodePartition& p) {
  const int k = p.cluster_count();
  if (k == 1) return true;
  std::vector<EdgeId> cuts = cut_set(t, p);
  if (static_cast<int>(cuts.size()) != k - 1) return false;
  // At most one crossing per cluster pair, and the contracted graph a tree.
  std::vector<std::vector<char>> crossed(k + 1, std::vector<char>(k + 1, 0));
  DisjointSet dsu(k + 1);
  for (EdgeId e : cuts) {
    const auto& [u, v] = t.parent().edge(e);
    int a = p.label_of(u), b = p.label_of(v);
    if (crossed[a][b]) return false;
    crossed[a][b] = crossed[b][a] = 1;
    if (!dsu.unite(a, b)) return false;
  }
  return true;  // k-1 acyclic contracted edges connect the k clusters
}

TreeFragment subtree_restriction(const SpanningTree& t, std::span<const NodeId> nodes) {
  if (nodes.empty())
    throw std::invalid_argument("subtree restriction: empty node set");
  std::vector<char> keep(t.parent().node_count(), 0);
  TreeFragment frag;
  frag.nodes.assign(nodes.begin(), nodes.end());
  std::sort(frag.nodes.begin(), frag.nodes.end());
  for (NodeId v : frag.nodes) keep.at(v) = 1;
  for (std::size_t i = 0; i < t.edges().size(); ++i) {
    EdgeId e = t.edges()[i];
    const auto& [u, v] = t.parent().edge(e);
    if (keep[u] && keep[v]) {
      frag.edge_ids.push_back(e);
      if (t.has_weights()) frag.weights.push_back(t.weights()[i]);
    }
  }
  return frag;
}

double alpha_ratio(const TreeFragment& fragment) {
  if (fragment.edge_ids.empty())
    throw std::invalid_argument("alpha ratio: fragment has no edges");
  if (fragment.weights.size() != fragment.edge_ids.size())
    throw std::invalid_argument("alpha ratio: fragment carries no weights");
  double lo = fragment.weights[0], hi = fragment.weights[0];
  for (double w : fragment.weights) {
    if (w <= 0.0) throw std::invalid_argument("alpha ratio: weights must be positive");
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return hi / lo;
}

bool is_homogeneously_separable(const TreeFragment& fragment, double s_weight) {
  if (fragment.edge_ids.empty()) return true;  // vacuous
  double hi = *std::max_element(fragment.weights.begin(), fragment.weights.end());
  return alpha_ratio(fragment) * hi < s_weight;
}

std::vector<NodeId> tree_path(const SpanningTree& t, NodeId from, NodeId to) {
  const GraphTopology& topo = t.parent();
  std::vector<NodeId> prev(topo.node_count(), -1);
  std::vector<char> seen(topo.node_count(), 0);
  std::vector<NodeId> stack = {from};
  seen[from] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (u == to) break;
    for (const auto& [v, id] : topo.adjacent(u)) {
      if (!seen[v] && t.contains_edge(id)) {
        seen[v] = 1;
        prev[v] = u;
        stack.push_back(v);
      }
    }
  }
  if (!seen[to]) throw std::runtime_error("tree path: nodes not connected in tree");
  std::vector<NodeId> path;
  for (NodeId x = to; x != -1; x = prev[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace privmst
