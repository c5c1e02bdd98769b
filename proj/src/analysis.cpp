#include "privmst/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "privmst/homogeneity.hpp"
#include "privmst/pamst.hpp"

namespace privmst {

namespace {

std::vector<int> first_occurrence_labels(std::span<const int> labels) {
  std::vector<int> canon(labels.size());
  int next = 0;
  std::vector<int> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int l = labels[i];
    if (static_cast<int>(seen.size()) < l + 1) seen.resize(l + 1, 0);
    if (seen[l] == 0) seen[l] = ++next;
    canon[i] = seen[l];
  }
  return canon;
}

double choose2(long long x) { return 0.5 * static_cast<double>(x) * (x - 1); }

TrialSummary summarize(int trials, int successes) {
  TrialSummary s;
  s.trials = trials;
  s.successes = successes;
  s.frequency = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  s.std_error =
      trials > 0 ? std::sqrt(s.frequency * (1.0 - s.frequency) / trials) : 0.0;
  s.half_width95 = 1.96 * s.std_error;
  return s;
}

}  // namespace

AgreementReport partition_agreement(const NodePartition& a, const NodePartition& b) {
  if (a.node_count() != b.node_count())
    throw std::invalid_argument("partition agreement: node count mismatch");
  AgreementReport report;
  report.exact_match =
      first_occurrence_labels(a.labels()) == first_occurrence_labels(b.labels());

  const int ka = a.cluster_count(), kb = b.cluster_count();
  std::vector<std::vector<long long>> contingency(ka, std::vector<long long>(kb, 0));
  for (NodeId v = 0; v < a.node_count(); ++v)
    ++contingency[a.label_of(v) - 1][b.label_of(v) - 1];

  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < ka; ++i) {
    long long row = 0;
    for (int j = 0; j < kb; ++j) {
      index += choose2(contingency[i][j]);
      row += contingency[i][j];
    }
    sum_a += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    long long col = 0;
    for (int i = 0; i < ka; ++i) col += contingency[i][j];
    sum_b += choose2(col);
  }
  double pairs = choose2(a.node_count());
  double expected = sum_a * sum_b / pairs;
  double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) {
    // Degenerate (both trivial partitions): identical iff exact match.
    report.adjusted_rand_index = report.exact_match ? 1.0 : 0.0;
  } else {
    report.adjusted_rand_index = (index - expected) / (max_index - expected);
  }
  return report;
}

NodePartition restrict_partition(const NodePartition& p, std::span<const NodeId> kept) {
  if (kept.empty())
    throw std::invalid_argument("restrict_partition: empty node set");
  std::vector<int> labels;
  labels.reserve(kept.size());
  for (NodeId v : kept) labels.push_back(p.label_of(v));
  return NodePartition(first_occurrence_labels(labels));
}

AgreementReport partition_agreement_excluding_singletons(const NodePartition& reference,
                                                         const NodePartition& found) {
  if (reference.node_count() != found.node_count())
    throw std::invalid_argument("partition agreement: node count mismatch");
  std::vector<int> sizes(found.cluster_count() + 1, 0);
  for (NodeId v = 0; v < found.node_count(); ++v) ++sizes[found.label_of(v)];
  std::vector<NodeId> kept;
  for (NodeId v = 0; v < found.node_count(); ++v)
    if (sizes[found.label_of(v)] >= 2) kept.push_back(v);
  if (kept.size() < 2) return AgreementReport{false, 0.0};
  return partition_agreement(restrict_partition(reference, kept),
                             restrict_partition(found, kept));
}

BoundReport topology_bound(const PlantedInstance& instance, double epsilon,
                           double delta_u, BoundVariant variant) {
  const WeightedGraph& g = instance.graph;
  const NodePartition& p = instance.partition;
  const int n = g.topology->node_count();
  const int e = g.topology->edge_count();
  const int k = p.cluster_count();

  BoundReport report;
  report.variant = variant;
  report.epsilon = epsilon;
  report.delta_u = delta_u;
  report.node_count = n;
  report.edge_count = e;
  report.clusters.resize(k);

  // Per-cluster intra-weight extremes over the whole graph.
  std::vector<double> lo(k + 1, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k + 1, 0.0);
  for (EdgeId id = 0; id < e; ++id) {
    const auto& [u, v] = g.topology->edge(id);
    if (p.label_of(u) == p.label_of(v)) {
      lo[p.label_of(u)] = std::min(lo[p.label_of(u)], g.weight(id));
      hi[p.label_of(u)] = std::max(hi[p.label_of(u)], g.weight(id));
    }
  }

  // alpha_bar by spanning-tree enumeration when feasible, else by the
  // per-cluster max/min ratio (valid for sufficient-condition instances).
  bool enumerated = false;
  std::vector<double> alpha(k + 1, 1.0);
  if (n <= 10) {
    try {
      HomogeneityReport strong = check_strong_homogeneity(g, p, 10);
      for (int c = 1; c <= k; ++c) alpha[c] = strong.clusters[c - 1].alpha_bar;
      enumerated = true;
    } catch (const std::invalid_argument&) {
      enumerated = false;
    }
  }
  if (!enumerated)
    for (int c = 1; c <= k; ++c)
      if (hi[c] > 0.0) alpha[c] = hi[c] / lo[c];

  auto members = p.members();
  double failure = 0.0;
  for (int c = 1; c <= k; ++c) {
    auto& row = report.clusters[c - 1];
    row.cluster = c;
    row.size = static_cast<int>(members[c - 1].size());
    row.alpha_bar = alpha[c];
    row.max_intra = hi[c] > 0.0 ? hi[c] : 0.0;
    row.min_intra = hi[c] > 0.0 ? lo[c] : 0.0;
    row.alpha_from_enumeration = enumerated;

    const double spread = alpha[c] * row.max_intra - row.min_intra;
    const double denom = 2.0 * delta_u * (n - 1);
    double term;
    if (variant == BoundVariant::theorem_text) {
      term = std::exp(-(epsilon * spread + std::log(static_cast<double>(e))) / denom);
    } else {
      term = std::exp(-epsilon * spread / denom) / e;
    }
    failure += (row.size - 1) * term;
  }
  report.bound_value = 1.0 - failure;
  report.vacuous = !(report.bound_value > 0.0);
  return report;
}

TrialSummary estimate_topology_probability(const PlantedInstance& instance,
                                           double epsilon, double mu, int trials,
                                           const RandomSource& rng) {
  if (trials < 1)
    throw std::invalid_argument("estimate_topology_probability: trials >= 1");
  PrivacyBudget budget(epsilon, mu);
  int successes = 0;
  for (int i = 0; i < trials; ++i) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(i));
    SpanningTree t = pamst(trial_rng, instance.graph, budget);
    if (has_partitioning_topology(t, instance.partition)) ++successes;
  }
  return summarize(trials, successes);
}

SeparabilityEstimate estimate_separability_preservation(
    const PlantedInstance& instance, const SpanningTree& tree, int cluster,
    const WeightReleaseParams& params, int trials, const RandomSource& rng,
    long long bound_draws) {
  if (cluster < 1 || cluster > instance.partition.cluster_count())
    throw std::invalid_argument("separability: bad cluster index");
  if (!tree.has_weights())
    throw std::invalid_argument("separability: tree carries no weights");

  const auto members = instance.partition.members()[cluster - 1];
  TreeFragment fragment = subtree_restriction(tree, members);
  if (fragment.edge_ids.empty())
    throw std::invalid_argument("separability: cluster fragment has no edges");

  // The planted cut edge: smallest-id tree edge leaving the cluster.
  std::vector<EdgeId> cuts = cut_set(tree, instance.partition);
  EdgeId out_edge = -1;
  for (EdgeId e : cuts) {
    const auto& [u, v] = tree.parent().edge(e);
    if (instance.partition.label_of(u) == cluster ||
        instance.partition.label_of(v) == cluster) {
      out_edge = e;
      break;
    }
  }
  if (out_edge < 0)
    throw std::invalid_argument("separability: cluster has no incident cut edge");
  if (!is_homogeneously_separable(fragment, tree.weight_of(out_edge)))
    throw std::invalid_argument(
        "separability: cluster is not separable before sanitization");

  SeparabilityEstimate est;
  int successes = 0;
  for (int i = 0; i < trials; ++i) {
    RandomSource trial_rng = rng.split(static_cast<std::uint64_t>(i));
    WeightReleaseResult released = weight_release(trial_rng, tree, params);
    TreeFragment noisy = subtree_restriction(released.tree, members);
    double lo = *std::min_element(noisy.weights.begin(), noisy.weights.end());
    if (lo > 0.0 &&
        is_homogeneously_separable(noisy, released.tree.weight_of(out_edge)))
      ++successes;
  }
  est.preserved = summarize(trials, successes);

  // Monte Carlo moments of phi = (max Y)^2 - (min Z) * X_out.
  const double w_max = *std::max_element(fragment.weights.begin(), fragment.weights.end());
  const double w_min = *std::min_element(fragment.weights.begin(), fragment.weights.end());
  const double theta_max = (w_max + params.tau) / params.p;
  const double theta_min = (w_min + params.tau) / params.p;
  const double theta_out = (tree.weight_of(out_edge) + params.tau) / params.p;
  const double delta = params.scale_s / params.p;
  const int m = static_cast<int>(members.size()) - 1;

  RandomSource phi_rng = rng.split(0x626f756e64ULL);
  double sum = 0.0, sum_sq = 0.0;
  for (long long i = 0; i < bound_draws; ++i) {
    double max_y = -std::numeric_limits<double>::infinity();
    double min_z = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      max_y = std::max(max_y, laplace_sample(phi_rng, theta_max, delta));
      min_z = std::min(min_z, laplace_sample(phi_rng, theta_min, delta));
    }
    double x_out = laplace_sample(phi_rng, theta_out, delta);
    double phi = max_y * max_y - min_z * x_out;
    sum += phi;
    sum_sq += phi * phi;
  }
  est.bound_draws = bound_draws;
  est.e_phi = sum / bound_draws;
  est.v_phi = std::max(0.0, sum_sq / bound_draws - est.e_phi * est.e_phi);
  if (est.e_phi >= 0.0) {
    est.vacuous = true;  // premise s << p, tau violated
    est.chebyshev_bound = 0.0;
  } else {
    est.chebyshev_bound = 1.0 - est.v_phi / (est.v_phi + est.e_phi * est.e_phi);
  }
  return est;
}

bool check_cluster_definition(const WeightedGraph& g,
                              std::span<const NodeId> d_space,
                              std::span<const NodeId> candidate) {
  if (candidate.size() > 15)
    throw std::invalid_argument("cluster definition: |C| capped at 15");
  if (candidate.size() <= 2) return false;
  for (NodeId c : candidate)
    if (std::find(d_space.begin(), d_space.end(), c) == d_space.end())
      throw std::invalid_argument("cluster definition: candidate not inside D");

  const int csize = static_cast<int>(candidate.size());
  // Distances from every candidate node to everything in D.
  std::vector<std::vector<double>> dist(csize);
  for (int i = 0; i < csize; ++i) {
    dist[i].resize(d_space.size());
    for (std::size_t z = 0; z < d_space.size(); ++z)
      dist[i][z] = minimum_path_distance(g, candidate[i], d_space[z]);
  }
  std::vector<int> cand_index(d_space.size(), -1);
  for (std::size_t z = 0; z < d_space.size(); ++z)
    for (int i = 0; i < csize; ++i)
      if (d_space[z] == candidate[i]) cand_index[z] = i;

  constexpr double kTieTol = 1e-12;
  // Proper bipartitions C = C1 (+) C2, both nonempty.
  for (unsigned mask = 1; mask + 1 < (1u << csize); ++mask) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < d_space.size(); ++z) {
      if (cand_index[z] >= 0 && (mask >> cand_index[z]) & 1u) continue;  // z in C1
      for (int i = 0; i < csize; ++i)
        if ((mask >> i) & 1u) best = std::min(best, dist[i][z]);
    }
    // Every minimizer must belong to C2 = C \ C1.
    for (std::size_t z = 0; z < d_space.size(); ++z) {
      if (cand_index[z] >= 0 && (mask >> cand_index[z]) & 1u) continue;
      double zmin = std::numeric_limits<double>::infinity();
      for (int i = 0; i < csize; ++i)
        if ((mask >> i) & 1u) zmin = std::min(zmin, dist[i][z]);
      if (zmin <= best + kTieTol) {
        bool in_c2 = cand_index[z] >= 0 && !((mask >> cand_index[z]) & 1u);
        if (!in_c2) return false;
      }
    }
  }
  return true;
}

std::vector<double> exact_selection_probabilities(std::span<const double> range_weights,
                                                  double epsilon_step, double delta_u) {
  if (range_weights.empty())
    throw std::invalid_argument("selection probabilities: empty range");
  double min_w = *std::min_element(range_weights.begin(), range_weights.end());
  long double total = 0.0L;
  std::vector<long double> mass(range_weights.size());
  for (std::size_t i = 0; i < range_weights.size(); ++i) {
    long double u = static_cast<long double>(min_w) - range_weights[i];
    mass[i] = std::exp(static_cast<long double>(epsilon_step) * u /
                       (2.0L * static_cast<long double>(delta_u)));
    total += mass[i];
  }
  std::vector<double> probs(range_weights.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    probs[i] = static_cast<double>(mass[i] / total);
  return probs;
}

double mechanism_privacy_audit(std::span<const double> range_weights,
                               double epsilon_step, double mu,
                               std::span<const double> per_edge_deltas) {
  const std::size_t r = range_weights.size();
  if (r == 0 || r > 6)
    throw std::invalid_argument("privacy audit: range size must be 1..6");
  for (double d : per_edge_deltas)
    if (std::fabs(d) > mu + 1e-15)
      throw std::invalid_argument("privacy audit: |delta| must not exceed mu");

  const double delta_u = 2.0 * mu;
  std::vector<double> base = exact_selection_probabilities(range_weights,
                                                           epsilon_step, delta_u);
  std::vector<double> perturbed(range_weights.begin(), range_weights.end());
  std::vector<std::size_t> idx(r, 0);
  double worst = 0.0;
  for (;;) {
    for (std::size_t i = 0; i < r; ++i)
      perturbed[i] = range_weights[i] + per_edge_deltas[idx[i]];
    std::vector<double> other =
        exact_selection_probabilities(perturbed, epsilon_step, delta_u);
    for (std::size_t i = 0; i < r; ++i)
      worst = std::max(worst, std::fabs(std::log(base[i] / other[i])));
    // Next grid point.
    std::size_t pos = 0;
    while (pos < r && ++idx[pos] == per_edge_deltas.size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == r) break;
  }
  return worst;
}

std::map<std::vector<EdgeId>, double> pamst_exact_distribution(
    const WeightedGraph& g, const PrivacyBudget& budget) {
  const GraphTopology& topo = *g.topology;
  const int n = topo.node_count();
  if (n < 2 || n > 7)
    throw std::invalid_argument("pamst exact distribution: 2..7 nodes");

  const double eps_step = budget.epsilon / (n - 1);
  const double delta_u = 2.0 * budget.mu;
  std::map<std::vector<EdgeId>, double> out;

  std::vector<char> in_tree(n, 0);
  std::vector<EdgeId> chosen;
  std::function<void(double)> expand = [&](double prob) {
    if (static_cast<int>(chosen.size()) == n - 1) {
      std::vector<EdgeId> key = chosen;
      std::sort(key.begin(), key.end());
      out[key] += prob;
      return;
    }
    std::vector<EdgeId> range;
    for (EdgeId e = 0; e < topo.edge_count(); ++e) {
      const auto& [u, v] = topo.edge(e);
      if (in_tree[u] != in_tree[v]) range.push_back(e);
    }
    std::vector<double> weights;
    weights.reserve(range.size());
    for (EdgeId e : range) weights.push_back(g.weight(e));
    std::vector<double> probs =
        exact_selection_probabilities(weights, eps_step, delta_u);
    for (std::size_t i = 0; i < range.size(); ++i) {
      const auto& [u, v] = topo.edge(range[i]);
      NodeId fresh = in_tree[u] ? v : u;
      in_tree[fresh] = 1;
      chosen.push_back(range[i]);
      expand(prob * probs[i]);
      chosen.pop_back();
      in_tree[fresh] = 0;
    }
  };

  for (NodeId start = 0; start < n; ++start) {
    std::fill(in_tree.begin(), in_tree.end(), 0);
    in_tree[start] = 1;
    expand(1.0 / n);
  }
  return out;
}

}  // namespace privmst
