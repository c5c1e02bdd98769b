#include "privmst/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "privmst/homogeneity.hpp"
#include "privmst/random.hpp"

namespace privmst {

namespace {

// Box-Muller.
double gaussian_sample(RandomSource& rng) {
  double u1 = rng.next_unit_open();
  double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

using Pair = std::pair<NodeId, NodeId>;

Pair ordered(NodeId a, NodeId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

struct PairLess {
  bool operator()(const Pair& a, const Pair& b) const { return a < b; }
};

double sq_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

void validate_weight_range(double w_min, double w_max) {
  if (!(w_min > 0.0) || !(w_min < w_max) || !(w_max <= 1.0))
    throw std::invalid_argument("datagen: need 0 < w_min < w_max <= 1");
  if (w_max * w_max / w_min > 1.0)
    throw std::invalid_argument(
        "datagen: w_max^2 / w_min = " + std::to_string(w_max * w_max / w_min) +
        " exceeds 1; inter-cluster weights cannot fit in (0, 1]");
}

struct EdgeDraft {
  Pair pair;
  double weight = 0.0;
  bool inter = false;
};

PlantedInstance assemble(std::vector<EdgeDraft> drafts, std::vector<int> labels,
                         GenerationParams params,
                         std::vector<std::array<double, 2>> positions) {
  std::sort(drafts.begin(), drafts.end(),
            [](const EdgeDraft& a, const EdgeDraft& b) { return a.pair < b.pair; });
  std::vector<Pair> pairs;
  std::vector<double> weights;
  std::vector<double> cut_weights;
  pairs.reserve(drafts.size());
  for (const EdgeDraft& d : drafts) {
    pairs.push_back(d.pair);
    weights.push_back(d.weight);
    if (d.inter) cut_weights.push_back(d.weight);
  }
  auto topo = std::make_shared<GraphTopology>(static_cast<int>(labels.size()),
                                              std::move(pairs));
  PlantedInstance inst{
      WeightedGraph{topo, WeightFunction{std::move(weights), 0.1}},
      NodePartition(std::move(labels)),
      std::move(cut_weights),
      std::move(params),
      std::move(positions)};

  if (!topo->is_connected())
    throw std::logic_error("datagen: generated graph is not connected");
  auto members = inst.partition.members();
  for (const auto& cluster : members)
    if (cluster.size() < 3)
      throw std::logic_error("datagen: cluster smaller than 3 nodes");
  if (!check_sufficient_homogeneity(inst.graph, inst.partition).holds)
    throw std::logic_error("datagen: sufficient homogeneity violated");
  return inst;
}

// Shared point-cloud -> graph recipe: k-nearest-neighbor candidates,
// per-cluster connectivity repair, one shortest inter edge per cluster
// pair, rank-affine intra weights, uniform (threshold, 1] inter weights.
PlantedInstance cloud_instance(const std::vector<std::array<double, 2>>& points,
                               const std::vector<int>& labels,
                               GenerationParams params, RandomSource& rng) {
  const int n = static_cast<int>(points.size());
  const int k = std::min(params.knn, n - 1);
  std::set<Pair, PairLess> candidates;
  for (NodeId i = 0; i < n; ++i) {
    std::vector<std::pair<double, NodeId>> dist;
    dist.reserve(n - 1);
    for (NodeId j = 0; j < n; ++j)
      if (j != i) dist.emplace_back(sq_dist(points[i], points[j]), j);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int t = 0; t < k; ++t) candidates.insert(ordered(i, dist[t].second));
  }

  std::vector<Pair> intra;
  std::map<std::pair<int, int>, std::vector<Pair>> inter_by_clusters;
  for (const Pair& pr : candidates) {
    int cu = labels[pr.first], cv = labels[pr.second];
    if (cu == cv)
      intra.push_back(pr);
    else
      inter_by_clusters[{std::min(cu, cv), std::max(cu, cv)}].push_back(pr);
  }

  // Repair intra connectivity cluster by cluster with the shortest
  // missing same-cluster pairs.
  const int cluster_count = *std::max_element(labels.begin(), labels.end());
  {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Pair& pr : intra) parent[find(pr.first)] = find(pr.second);
    std::vector<std::pair<double, Pair>> missing;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (labels[i] == labels[j] && !candidates.count({i, j}))
          missing.push_back({sq_dist(points[i], points[j]), {i, j}});
    std::sort(missing.begin(), missing.end());
    for (const auto& [d, pr] : missing) {
      if (find(pr.first) != find(pr.second)) {
        parent[find(pr.first)] = find(pr.second);
        intra.push_back(pr);
        candidates.insert(pr);
      }
    }
  }

  // One inter edge per cluster pair: the shortest candidate, or the
  // overall shortest pair when the neighborhoods never crossed.
  std::vector<Pair> inter;
  for (int a = 1; a <= cluster_count; ++a) {
    for (int b = a + 1; b <= cluster_count; ++b) {
      const auto it = inter_by_clusters.find({a, b});
      Pair best{-1, -1};
      double best_d = std::numeric_limits<double>::infinity();
      if (it != inter_by_clusters.end()) {
        for (const Pair& pr : it->second) {
          double d = sq_dist(points[pr.first], points[pr.second]);
          if (d < best_d) {
            best_d = d;
            best = pr;
          }
        }
      } else {
        for (NodeId i = 0; i < n; ++i)
          for (NodeId j = i + 1; j < n; ++j)
            if ((labels[i] == a && labels[j] == b) ||
                (labels[i] == b && labels[j] == a)) {
              double d = sq_dist(points[i], points[j]);
              if (d < best_d) {
                best_d = d;
                best = ordered(i, j);
              }
            }
      }
      inter.push_back(best);
    }
  }

  // Intra weights by distance rank, affinely into [w_min, w_max]; ranks
  // are taken per cluster so every cluster spans the same weight profile.
  std::sort(intra.begin(), intra.end());
  std::vector<EdgeDraft> drafts(intra.size());
  for (int c = 1; c <= cluster_count; ++c) {
    std::vector<std::pair<double, std::size_t>> rank;
    for (std::size_t i = 0; i < intra.size(); ++i)
      if (labels[intra[i].first] == c)
        rank.push_back({sq_dist(points[intra[i].first], points[intra[i].second]), i});
    std::sort(rank.begin(), rank.end());
    const std::size_t m = rank.size();
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t i = rank[r].second;
      double w = (m > 1) ? params.w_min + (params.w_max - params.w_min) * r / (m - 1)
                         : params.w_min;
      drafts[i] = EdgeDraft{intra[i], w, false};
    }
  }
  const double threshold = params.w_max * params.w_max / params.w_min;
  std::sort(inter.begin(), inter.end());
  for (const Pair& pr : inter) {
    double w = 1.0 - rng.next_unit() * (1.0 - threshold);  // (threshold, 1]
    drafts.push_back(EdgeDraft{pr, w, true});
  }
  return assemble(std::move(drafts), labels, std::move(params),
                  std::vector<std::array<double, 2>>(points));
}

std::vector<int> half_half_labels(int n) {
  std::vector<int> labels(n, 1);
  for (int i = n / 2; i < n; ++i) labels[i] = 2;
  return labels;
}

void validate_cloud_args(int n, double w_min, double w_max) {
  if (n < 6 || n % 2 != 0)
    throw std::invalid_argument("datagen: n must be even and at least 6");
  validate_weight_range(w_min, w_max);
}

}  // namespace

PlantedInstance generate_circles(std::uint64_t seed, int n, double w_min,
                                 double w_max, int knn) {
  validate_cloud_args(n, w_min, w_max);
  RandomSource rng(seed);
  std::vector<std::array<double, 2>> points(n);
  const double noise = 0.05;
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    // Evenly spaced angles, jittered: the classic noisy-rings cloud.
    double radius = (i < half) ? 1.0 : 0.5;
    double angle = 2.0 * std::numbers::pi * (i % half) / half;
    points[i] = {radius * std::cos(angle) + noise * gaussian_sample(rng),
                 radius * std::sin(angle) + noise * gaussian_sample(rng)};
  }
  GenerationParams params{"circles", n,   w_min, w_max, noise,
                          knn,       seed, {},    0,     0};
  return cloud_instance(points, half_half_labels(n), std::move(params), rng);
}

PlantedInstance generate_moons(std::uint64_t seed, int n, double w_min,
                               double w_max, int knn) {
  validate_cloud_args(n, w_min, w_max);
  RandomSource rng(seed);
  std::vector<std::array<double, 2>> points(n);
  const double noise = 0.05;
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    double t = std::numbers::pi * (i % half) / (half - 1);
    double x = (i < half) ? std::cos(t) : 1.0 - std::cos(t);
    double y = (i < half) ? std::sin(t) : 0.5 - std::sin(t);
    points[i] = {x + noise * gaussian_sample(rng), y + noise * gaussian_sample(rng)};
  }
  GenerationParams params{"moons", n,    w_min, w_max, noise,
                          knn,     seed, {},    0,     0};
  return cloud_instance(points, half_half_labels(n), std::move(params), rng);
}

PlantedInstance generate_planted_partition(std::uint64_t seed,
                                           const std::vector<int>& cluster_sizes,
                                           int intra_degree,
                                           int inter_edges_per_pair,
                                           double w_min, double w_max) {
  if (cluster_sizes.empty())
    throw std::invalid_argument("datagen: need at least one cluster");
  for (int size : cluster_sizes)
    if (size < 3)
      throw std::invalid_argument("datagen: every cluster needs at least 3 nodes");
  if (intra_degree < 1)
    throw std::invalid_argument("datagen: intra_degree must be at least 1");
  const int k = static_cast<int>(cluster_sizes.size());
  if (k > 1 && inter_edges_per_pair < 1)
    throw std::invalid_argument(
        "datagen: inter_edges_per_pair must be at least 1 to keep the graph connected");
  validate_weight_range(w_min, w_max);

  RandomSource rng(seed);
  const double threshold = w_max * w_max / w_min;
  std::vector<int> base(k, 0);
  int n = 0;
  for (int c = 0; c < k; ++c) {
    base[c] = n;
    n += cluster_sizes[c];
  }
  std::vector<int> labels(n);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < cluster_sizes[c]; ++i) labels[base[c] + i] = c + 1;

  std::set<Pair, PairLess> used;
  std::vector<EdgeDraft> drafts;
  auto intra_weight = [&] { return w_min + rng.next_unit() * (w_max - w_min); };

  for (int c = 0; c < k; ++c) {
    const int size = cluster_sizes[c];
    // Random recursive tree keeps the cluster connected.
    for (int j = 1; j < size; ++j) {
      NodeId a = base[c] + static_cast<NodeId>(rng.next_below(j));
      NodeId b = base[c] + j;
      Pair pr = ordered(a, b);
      used.insert(pr);
      drafts.push_back(EdgeDraft{pr, intra_weight(), false});
    }
    long long capacity = static_cast<long long>(size) * (size - 1) / 2;
    long long target =
        std::min<long long>(capacity, static_cast<long long>(size) * intra_degree / 2);
    long long extras = std::max<long long>(0, target - (size - 1));
    long long attempts = 0;
    while (extras > 0 && attempts < 50 * (extras + 1)) {
      ++attempts;
      NodeId a = base[c] + static_cast<NodeId>(rng.next_below(size));
      NodeId b = base[c] + static_cast<NodeId>(rng.next_below(size));
      if (a == b) continue;
      Pair pr = ordered(a, b);
      if (!used.insert(pr).second) continue;
      drafts.push_back(EdgeDraft{pr, intra_weight(), false});
      --extras;
    }
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      int remaining = inter_edges_per_pair;
      long long attempts = 0;
      while (remaining > 0) {
        if (++attempts > 50LL * (inter_edges_per_pair + 1))
          throw std::invalid_argument(
              "datagen: cannot place the requested inter-cluster edges");
        NodeId u = base[a] + static_cast<NodeId>(rng.next_below(cluster_sizes[a]));
        NodeId v = base[b] + static_cast<NodeId>(rng.next_below(cluster_sizes[b]));
        Pair pr = ordered(u, v);
        if (!used.insert(pr).second) continue;
        double w = 1.0 - rng.next_unit() * (1.0 - threshold);
        drafts.push_back(EdgeDraft{pr, w, true});
        --remaining;
      }
    }
  }
  GenerationParams params{"planted",    n,
                          w_min,        w_max,
                          0.0,          0,
                          seed,         cluster_sizes,
                          intra_degree, inter_edges_per_pair};
  return assemble(std::move(drafts), std::move(labels), std::move(params), {});
}

}  // namespace privmst
