#include "privmst/pamst.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace privmst {

void Frontier::init(const GraphTopology& g, NodeId start) {
  in_tree.assign(g.node_count(), 0);
  tree_size = 0;
  range.clear();
  in_tree[start] = 1;
  tree_size = 1;
  for (const auto& [v, id] : g.adjacent(start)) {
    (void)v;
    range.insert(id);
  }
}

void Frontier::add_node(const GraphTopology& g, NodeId v) {
  if (in_tree[v]) throw std::logic_error("frontier: node already spanned");
  in_tree[v] = 1;
  ++tree_size;
  for (const auto& [w, id] : g.adjacent(v)) {
    if (in_tree[w])
      range.erase(id);  // both endpoints spanned now
    else
      range.insert(id);
  }
}

SpanningTree pamst(RandomSource& rng, const WeightedGraph& g,
                   const PrivacyBudget& budget) {
  const GraphTopology& topo = *g.topology;
  const int n = topo.node_count();
  if (n < 2) throw std::invalid_argument("pamst: need at least two nodes");

  const double eps_step = budget.epsilon / (n - 1);
  const double delta_u = utility_sensitivity(budget);

  NodeId start = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
  Frontier frontier;
  frontier.init(topo, start);

  std::vector<EdgeId> tree_edges;
  tree_edges.reserve(n - 1);
  std::vector<EdgeId> range_buf;
  while (frontier.tree_size < n) {
    if (frontier.range.empty())
      throw std::runtime_error("pamst: graph is disconnected");
    range_buf.assign(frontier.range.begin(), frontier.range.end());
    EdgeId r = exponential_mechanism(rng, g, range_buf, eps_step, delta_u);
    const auto& [a, b] = topo.edge(r);
    if (frontier.in_tree[a] == frontier.in_tree[b])
      throw std::logic_error("pamst: selected edge is not xor-incident");
    NodeId fresh = frontier.in_tree[a] ? b : a;
    tree_edges.push_back(r);
    frontier.add_node(topo, fresh);
  }
  return SpanningTree(g.topology, std::move(tree_edges));  // topology only
}

GapEstimate expected_weight_gap(const WeightedGraph& g,
                                const PrivacyBudget& budget, int trials,
                                const RandomSource& rng) {
  if (trials < 1) throw std::invalid_argument("expected_weight_gap: trials >= 1");
  SpanningTree mst = minimum_spanning_tree(g);
  const double mst_weight = g.total_weight(mst.edges());

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(i));
    SpanningTree t = pamst(trial_rng, g, budget);
    double gap = g.total_weight(t.edges()) - mst_weight;
    sum += gap;
    sum_sq += gap * gap;
  }
  GapEstimate est;
  est.trials = trials;
  est.mean = sum / trials;
  double var = std::max(0.0, sum_sq / trials - est.mean * est.mean);
  est.std_error = std::sqrt(var / trials);
  return est;
}

}  // namespace privmst
