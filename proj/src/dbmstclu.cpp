#include "privmst/dbmstclu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace privmst {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClusteringState::ClusteringState(SpanningTree tree) : tree_(std::move(tree)) {
  if (!tree_.has_weights())
    throw std::invalid_argument("dbmstclu: tree carries no weights");
  for (double w : tree_.weights())
    if (!(w > 0.0) || w > 1.0)
      throw std::invalid_argument("dbmstclu: weights must lie in (0, 1]");

  const GraphTopology& topo = tree_.parent();
  tree_adj_.resize(topo.node_count());
  for (std::size_t i = 0; i < tree_.edges().size(); ++i) {
    EdgeId e = tree_.edges()[i];
    const auto& [u, v] = topo.edge(e);
    tree_adj_[u].emplace_back(v, e);
    tree_adj_[v].emplace_back(u, e);
  }
  cut_flag_.assign(topo.edge_count(), 0);
  cluster_of_.assign(topo.node_count(), 1);

  // Single cluster: separation 1 by convention, dispersion = max weight.
  ClusterMetrics whole;
  whole.size = topo.node_count();
  whole.dispersion = 0.0;
  for (double w : tree_.weights()) whole.dispersion = std::max(whole.dispersion, w);
  whole.separation = 1.0;
  whole.validity = validity_index(whole.dispersion, whole.separation);
  metrics_ = {whole};
  dbcvi_ = whole.validity;
}

bool ClusteringState::is_cut(EdgeId e) const {
  return e >= 0 && e < static_cast<EdgeId>(cut_flag_.size()) && cut_flag_[e];
}

double ClusteringState::tree_weight(EdgeId e) const { return tree_.weight_of(e); }

// One evaluated candidate: the split halves' nodes and metrics.
struct ClusteringState::Split {
  EdgeId edge = -1;
  int cluster = 0;  // cluster being split
  std::vector<NodeId> side_a;  // component of the smaller endpoint
  std::vector<NodeId> side_b;
  ClusterMetrics metrics_a;
  ClusterMetrics metrics_b;
  double new_dbcvi = 0.0;
};

ClusteringState::Split ClusteringState::evaluate_split(EdgeId e) const {
  if (!tree_.contains_edge(e))
    throw std::invalid_argument("evaluate_cut: edge " + std::to_string(e) +
                                " is not a tree edge");
  if (cut_flag_[e])
    throw std::invalid_argument("evaluate_cut: edge " + std::to_string(e) +
                                " is already cut");
  const GraphTopology& topo = tree_.parent();
  const auto& [eu, ev] = topo.edge(e);
  const int cluster = cluster_of_[eu];
  const double w_cut = tree_.weight_of(e);
  const int n = topo.node_count();

  // Flood each half along uncut tree edges; the candidate edge is blocked.
  // 1 = side of the smaller endpoint, 2 = other side.
  std::vector<char> side(n, 0);
  auto flood = [&](NodeId origin, char tag, std::vector<NodeId>& nodes,
                   double& disp) {
    std::vector<NodeId> stack = {origin};
    side[origin] = tag;
    disp = 0.0;
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      nodes.push_back(x);
      for (const auto& [y, id] : tree_adj_[x]) {
        if (id == e || cut_flag_[id]) continue;
        disp = std::max(disp, tree_.weight_of(id));
        if (!side[y]) {
          side[y] = tag;
          stack.push_back(y);
        }
      }
    }
  };

  Split split;
  split.edge = e;
  split.cluster = cluster;
  flood(eu, 1, split.side_a, split.metrics_a.dispersion);
  flood(ev, 2, split.side_b, split.metrics_b.dispersion);
  split.metrics_a.size = static_cast<int>(split.side_a.size());
  split.metrics_b.size = static_cast<int>(split.side_b.size());

  // Separation: the new cut plus whichever existing cuts touch each half.
  double sep_a = w_cut, sep_b = w_cut;
  for (EdgeId cut : cuts_) {
    const auto& [cu, cv] = topo.edge(cut);
    for (NodeId endpoint : {cu, cv}) {
      if (side[endpoint] == 1)
        sep_a = std::min(sep_a, tree_.weight_of(cut));
      else if (side[endpoint] == 2)
        sep_b = std::min(sep_b, tree_.weight_of(cut));
    }
  }
  split.metrics_a.separation = sep_a;
  split.metrics_b.separation = sep_b;
  split.metrics_a.validity =
      validity_index(split.metrics_a.dispersion, split.metrics_a.separation);
  split.metrics_b.validity =
      validity_index(split.metrics_b.dispersion, split.metrics_b.separation);

  const ClusterMetrics& old_metrics = metrics_[cluster - 1];
  split.new_dbcvi = dbcvi_ +
                    (split.metrics_a.size * split.metrics_a.validity +
                     split.metrics_b.size * split.metrics_b.validity -
                     old_metrics.size * old_metrics.validity) /
                        n;
  return split;
}

void ClusteringState::apply_cut(EdgeId e) {
  Split split = evaluate_split(e);
  const int fresh = cluster_count() + 1;
  for (NodeId v : split.side_b) cluster_of_[v] = fresh;
  metrics_[split.cluster - 1] = split.metrics_a;
  metrics_.push_back(split.metrics_b);
  cut_flag_[e] = 1;
  cuts_.push_back(e);
  dbcvi_ = split.new_dbcvi;
#ifndef NDEBUG
  double reference = dbcvi(*this);
  if (std::fabs(reference - dbcvi_) > 1e-9)
    throw std::logic_error("dbmstclu: incremental dbcvi drifted from definition");
#endif
}

NodePartition ClusteringState::partition() const {
  // Canonical labels: clusters ordered by their smallest member node.
  const int n = static_cast<int>(cluster_of_.size());
  std::vector<int> first_seen(cluster_count() + 1, -1);
  std::vector<int> order;
  for (NodeId v = 0; v < n; ++v) {
    int c = cluster_of_[v];
    if (first_seen[c] < 0) {
      first_seen[c] = static_cast<int>(order.size()) + 1;
      order.push_back(c);
    }
  }
  std::vector<int> labels(n);
  for (NodeId v = 0; v < n; ++v) labels[v] = first_seen[cluster_of_[v]];
  return NodePartition(std::move(labels));
}

double dispersion(const ClusteringState& s, int cluster) {
  if (cluster < 1 || cluster > s.cluster_count())
    throw std::invalid_argument("dispersion: bad cluster index");
  const GraphTopology& topo = s.tree().parent();
  double disp = 0.0;
  for (EdgeId e : s.tree().edges()) {
    if (s.is_cut(e)) continue;
    const auto& [u, v] = topo.edge(e);
    if (s.cluster_of(u) == cluster && s.cluster_of(v) == cluster)
      disp = std::max(disp, s.tree_weight(e));
  }
  return disp;  // 0 when the cluster has no edges
}

double separation(const ClusteringState& s, int cluster) {
  if (cluster < 1 || cluster > s.cluster_count())
    throw std::invalid_argument("separation: bad cluster index");
  if (s.cluster_count() == 1) return 1.0;
  const GraphTopology& topo = s.tree().parent();
  double sep = kInf;
  for (EdgeId e : s.cut_edges()) {
    const auto& [u, v] = topo.edge(e);
    if (s.cluster_of(u) == cluster || s.cluster_of(v) == cluster)
      sep = std::min(sep, s.tree_weight(e));
  }
  // K >= 2 guarantees every cluster borders at least one cut edge.
  return sep;
}

double validity_index(double disp, double sep) {
  double denom = std::max(sep, disp);
  if (!(denom > 0.0))
    throw std::invalid_argument("validity index: sep and disp are both zero");
  return (sep - disp) / denom;
}

double dbcvi(const ClusteringState& s) {
  const int n = s.tree().parent().node_count();
  double total = 0.0;
  for (int c = 1; c <= s.cluster_count(); ++c) {
    double v = validity_index(dispersion(s, c), separation(s, c));
    int size = 0;
    for (NodeId x = 0; x < n; ++x)
      if (s.cluster_of(x) == c) ++size;
    total += static_cast<double>(size) / n * v;
  }
  return total;
}

double evaluate_cut(const ClusteringState& s, EdgeId candidate) {
  return s.evaluate_split(candidate).new_dbcvi;
}

ClusterIndexReport cluster_report(const ClusteringState& s) {
  // Report rows follow the canonical partition labels.
  NodePartition canon = s.partition();
  std::vector<int> internal_of(canon.cluster_count() + 1, 0);
  for (NodeId v = 0; v < canon.node_count(); ++v)
    internal_of[canon.label_of(v)] = s.cluster_of(v);
  ClusterIndexReport report;
  report.clusters.reserve(canon.cluster_count());
  for (int c = 1; c <= canon.cluster_count(); ++c)
    report.clusters.push_back(s.metrics(internal_of[c]));
  report.dbcvi = s.dbcvi_value();
  return report;
}

DbmstcluResult run_dbmstclu(const SpanningTree& t, const CutObserver& observer) {
  ClusteringState state(t);
  std::vector<double> sequence;

  std::vector<EdgeId> remaining(t.edges().begin(), t.edges().end());
  double loop_dbcvi = -1.0;
  const int max_rounds = t.edge_count();  // each round removes one edge
  for (int round = 0; round < max_rounds && loop_dbcvi < 1.0; ++round) {
    EdgeId best = -1;
    double best_value = loop_dbcvi;
    for (EdgeId e : remaining) {  // ascending edge id
      double value = evaluate_cut(state, e);
      if (observer) observer(state, e, value);
      if (value >= best_value) {  // later ties replace earlier
        best = e;
        best_value = value;
      }
    }
    if (best < 0) break;
    state.apply_cut(best);
    sequence.push_back(best_value);
    loop_dbcvi = best_value;
    remaining.erase(std::find(remaining.begin(), remaining.end(), best));
  }
  ClusterIndexReport report = cluster_report(state);
  return DbmstcluResult{std::move(state), std::move(report), std::move(sequence)};
}

}  // namespace privmst
