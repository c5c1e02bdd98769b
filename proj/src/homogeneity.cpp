#include "privmst/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace privmst {

namespace {

constexpr double kEnumerationCap = 2e6;  // spanning trees per graph

struct UndoUnionFind {
  std::vector<int> parent, size;
  // (child root, parent root) pairs for rollback
  std::vector<std::pair<int, int>> log;

  explicit UndoUnionFind(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) const {
    while (parent[x] != x) x = parent[x];  // no compression: undo-able
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    log.emplace_back(b, a);
    return true;
  }
  void undo() {
    auto [b, a] = log.back();
    log.pop_back();
    parent[b] = b;
    size[a] -= size[b];
  }
};

void enumerate_rec(const GraphTopology& g, int next_edge, int chosen,
                   UndoUnionFind& dsu, std::vector<EdgeId>& picked,
                   const std::function<void(std::span<const EdgeId>)>& visit) {
  const int need = g.node_count() - 1;
  if (chosen == need) {
    visit(picked);
    return;
  }
  if (next_edge == g.edge_count()) return;
  if (chosen + (g.edge_count() - next_edge) < need) return;  // cannot finish

  const auto& [u, v] = g.edge(next_edge);
  if (dsu.unite(u, v)) {
    picked.push_back(next_edge);
    enumerate_rec(g, next_edge + 1, chosen + 1, dsu, picked, visit);
    picked.pop_back();
    dsu.undo();
  }
  enumerate_rec(g, next_edge + 1, chosen, dsu, picked, visit);
}

// Shared body of the strong/weak checks; `trees` supplies the ensemble.
HomogeneityReport check_over_trees(
    const WeightedGraph& g, const NodePartition& p,
    const std::vector<std::vector<EdgeId>>& trees) {
  HomogeneityReport report;
  report.clusters.resize(p.cluster_count());
  for (int c = 1; c <= p.cluster_count(); ++c) report.clusters[c - 1].cluster = c;
  report.trees_checked = static_cast<long long>(trees.size());

  const GraphTopology& topo = *g.topology;
  for (const auto& tree_edges : trees) {
    // Fragment extremes per cluster under this tree.
    const int k = p.cluster_count();
    std::vector<double> frag_min(k + 1, std::numeric_limits<double>::infinity());
    std::vector<double> frag_max(k + 1, 0.0);
    std::vector<EdgeId> crossing;
    for (EdgeId e : tree_edges) {
      const auto& [u, v] = topo.edge(e);
      int cu = p.label_of(u), cv = p.label_of(v);
      if (cu == cv) {
        frag_min[cu] = std::min(frag_min[cu], g.weight(e));
        frag_max[cu] = std::max(frag_max[cu], g.weight(e));
      } else {
        crossing.push_back(e);
      }
    }
    for (int c = 1; c <= k; ++c) {
      auto& entry = report.clusters[c - 1];
      if (frag_max[c] > 0.0) {
        if (frag_min[c] <= 0.0)
          throw std::invalid_argument("homogeneity: weights must be positive");
        entry.alpha_bar = std::max(entry.alpha_bar, frag_max[c] / frag_min[c]);
      }
    }
    for (EdgeId e : crossing) {
      const auto& [u, v] = topo.edge(e);
      for (int c : {p.label_of(u), p.label_of(v)}) {
        auto& entry = report.clusters[c - 1];
        if (frag_max[c] == 0.0) continue;  // edgeless fragment: vacuous
        double alpha = frag_max[c] / frag_min[c];
        double margin = g.weight(e) - alpha * frag_max[c];
        entry.margin = std::min(entry.margin, margin);
        if (margin <= 0.0) entry.holds = false;
      }
    }
  }
  for (const auto& entry : report.clusters)
    report.all_hold = report.all_hold && entry.holds;
  return report;
}

std::vector<std::vector<EdgeId>> all_spanning_trees(const WeightedGraph& g,
                                                    const NodePartition& p,
                                                    int max_nodes,
                                                    const char* caller) {
  const GraphTopology& topo = *g.topology;
  if (p.node_count() != topo.node_count())
    throw std::invalid_argument("homogeneity: partition does not match graph");
  if (topo.node_count() > max_nodes)
    throw std::invalid_argument(
        std::string(caller) + ": " + std::to_string(topo.node_count()) +
        " nodes exceed the enumeration cap of " + std::to_string(max_nodes) +
        "; use check_sufficient_homogeneity instead");
  double count = count_spanning_trees(topo);
  if (count > kEnumerationCap)
    throw std::invalid_argument(std::string(caller) + ": graph has ~" +
                                std::to_string(count) +
                                " spanning trees, beyond the enumeration cap");
  std::vector<std::vector<EdgeId>> trees;
  trees.reserve(static_cast<std::size_t>(count));
  for_each_spanning_tree(topo, [&](std::span<const EdgeId> edges) {
    trees.emplace_back(edges.begin(), edges.end());
  });
  return trees;
}

}  // namespace

double count_spanning_trees(const GraphTopology& g) {
  const int n = g.node_count();
  if (n == 1) return 1.0;
  // Laplacian minor determinant.
  std::vector<std::vector<long double>> m(n - 1, std::vector<long double>(n - 1, 0.0L));
  for (const auto& [u, v] : g.edges()) {
    if (u < n - 1) m[u][u] += 1.0L;
    if (v < n - 1) m[v][v] += 1.0L;
    if (u < n - 1 && v < n - 1) {
      m[u][v] -= 1.0L;
      m[v][u] -= 1.0L;
    }
  }
  long double det = 1.0L;
  for (int col = 0; col < n - 1; ++col) {
    int pivot = -1;
    for (int row = col; row < n - 1; ++row)
      if (pivot < 0 || std::fabs((double)m[row][col]) > std::fabs((double)m[pivot][col]))
        pivot = row;
    if (std::fabs((double)m[pivot][col]) < 1e-12) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int row = col + 1; row < n - 1; ++row) {
      long double f = m[row][col] / m[col][col];
      for (int j = col; j < n - 1; ++j) m[row][j] -= f * m[col][j];
    }
  }
  return static_cast<double>(std::round((double)det));
}

void for_each_spanning_tree(
    const GraphTopology& g,
    const std::function<void(std::span<const EdgeId>)>& visit) {
  UndoUnionFind dsu(g.node_count());
  std::vector<EdgeId> picked;
  picked.reserve(g.node_count() - 1);
  enumerate_rec(g, 0, 0, dsu, picked, visit);
}

HomogeneityReport check_strong_homogeneity(const WeightedGraph& g,
                                           const NodePartition& p,
                                           int max_nodes) {
  return check_over_trees(
      g, p, all_spanning_trees(g, p, max_nodes, "check_strong_homogeneity"));
}

HomogeneityReport check_weak_homogeneity(const WeightedGraph& g,
                                         const NodePartition& p, int max_nodes) {
  auto trees = all_spanning_trees(g, p, max_nodes, "check_weak_homogeneity");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : trees) best = std::min(best, g.total_weight(t));
  std::vector<std::vector<EdgeId>> msts;
  for (auto& t : trees)
    if (g.total_weight(t) <= best + 1e-12) msts.push_back(std::move(t));
  return check_over_trees(g, p, msts);
}

SufficientHomogeneityReport check_sufficient_homogeneity(const WeightedGraph& g,
                                                         const NodePartition& p) {
  const GraphTopology& topo = *g.topology;
  if (p.node_count() != topo.node_count())
    throw std::invalid_argument("homogeneity: partition does not match graph");
  const int k = p.cluster_count();
  std::vector<double> lo(k + 1, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k + 1, 0.0);
  for (EdgeId e = 0; e < topo.edge_count(); ++e) {
    const auto& [u, v] = topo.edge(e);
    int cu = p.label_of(u), cv = p.label_of(v);
    if (cu == cv) {
      lo[cu] = std::min(lo[cu], g.weight(e));
      hi[cu] = std::max(hi[cu], g.weight(e));
    }
  }
  SufficientHomogeneityReport report;
  report.cluster_thresholds.resize(k);
  for (int c = 1; c <= k; ++c) {
    // Clusters with no intra edge impose no constraint.
    report.cluster_thresholds[c - 1] = (hi[c] > 0.0) ? hi[c] * hi[c] / lo[c] : 0.0;
  }
  report.holds = true;
  double worst_threshold = 0.0;
  for (EdgeId e = 0; e < topo.edge_count(); ++e) {
    const auto& [u, v] = topo.edge(e);
    int cu = p.label_of(u), cv = p.label_of(v);
    if (cu == cv) continue;
    double w = g.weight(e);
    report.min_inter_weight = std::min(report.min_inter_weight, w);
    double threshold =
        std::max(report.cluster_thresholds[cu - 1], report.cluster_thresholds[cv - 1]);
    worst_threshold = std::max(worst_threshold, threshold);
    if (!(w > threshold)) report.holds = false;
  }
  report.margin = std::isinf(report.min_inter_weight)
                      ? 0.0
                      : report.min_inter_weight - worst_threshold;
  return report;
}

}  // namespace privmst
