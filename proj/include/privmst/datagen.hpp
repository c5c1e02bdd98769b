// Synthetic homogeneous instances with planted partitions: noisy
// two-circles and two-moons point clouds turned into weighted graphs, plus
// a generic planted-partition family for property tests. Every emitted
// instance passes the sufficient homogeneity check and is connected.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "privmst/graph.hpp"

namespace privmst {

struct GenerationParams {
  std::string shape;  // circles | moons | planted
  int n = 0;          // total nodes
  double w_min = 0.1;
  double w_max = 0.3;
  double noise = 0.05;  // point-cloud jitter (shapes only)
  int knn = 8;          // candidate-edge neighborhood (shapes only)
  std::uint64_t seed = 0;
  std::vector<int> cluster_sizes;     // planted only
  int intra_degree = 0;               // planted only
  int inter_edges_per_pair = 0;       // planted only
};

struct PlantedInstance {
  WeightedGraph graph;
  NodePartition partition;                      // ground truth, labels 1..K
  std::vector<double> planted_cut_weights;      // inter-cluster edge weights
  GenerationParams params;
  std::vector<std::array<double, 2>> positions;  // empty for planted shape
};

// Two concentric noisy circles of n/2 points each. Intra-cluster edges
// come from a k-nearest-neighbor candidate set (connectivity repaired with
// minimum-distance pairs) and get weights affinely mapped into
// [w_min, w_max] by distance rank; each cluster pair keeps its single
// shortest candidate inter edge, weighted uniformly in (w_max^2/w_min, 1].
// Requires n >= 6 even, 0 < w_min < w_max <= 1, w_max^2/w_min <= 1.
PlantedInstance generate_circles(std::uint64_t seed, int n, double w_min,
                                 double w_max, int knn = 8);

// Two interleaved noisy half-moons; same graph recipe as the circles.
PlantedInstance generate_moons(std::uint64_t seed, int n, double w_min,
                               double w_max, int knn = 8);

// K clusters of the given sizes (each >= 3): random connected intra graphs
// with weights in [w_min, w_max], inter_edges_per_pair (>= 1) edges between
// every cluster pair with weights in (w_max^2/w_min, 1].
PlantedInstance generate_planted_partition(std::uint64_t seed,
                                           const std::vector<int>& cluster_sizes,
                                           int intra_degree,
                                           int inter_edges_per_pair,
                                           double w_min, double w_max);

}  // namespace privmst
