// Private almost-minimum spanning tree topology release: Prim-style
// frontier growth with one exponential-mechanism edge selection per step,
// each at budget epsilon / (|V| - 1).
#pragma once

#include <set>
#include <vector>

#include "privmst/graph.hpp"
#include "privmst/mechanisms.hpp"
#include "privmst/random.hpp"

namespace privmst {

// Grown-tree frontier: the node set already spanned and the edges incident
// to exactly one spanned node (the selection range), kept ordered.
struct Frontier {
  std::vector<char> in_tree;
  int tree_size = 0;
  std::set<EdgeId> range;

  void init(const GraphTopology& g, NodeId start);
  // Adds v: edges toward the tree leave the range, edges away enter it.
  void add_node(const GraphTopology& g, NodeId v);
};

// Returns the released topology only; weights stay private (attaching
// sanitized weights is the weight-release mechanism's job). The start node
// is drawn uniformly from rng. Requires a connected graph with >= 2 nodes.
SpanningTree pamst(RandomSource& rng, const WeightedGraph& g,
                   const PrivacyBudget& budget);

struct GapEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

// Monte Carlo estimate of E[w(T_pamst)] - w(T_mst); trial i draws from
// rng.split(i).
GapEstimate expected_weight_gap(const WeightedGraph& g,
                                const PrivacyBudget& budget, int trials,
                                const RandomSource& rng);

}  // namespace privmst
