// Randomized privacy primitives: Laplace sampling, the edge-selection
// exponential mechanism, and the weight-release (noise + affine
// normalization) mechanism. All draws come from an explicit RandomSource.
#pragma once

#include <span>
#include <vector>

#include "privmst/graph.hpp"
#include "privmst/random.hpp"

namespace privmst {

// Privacy degree plus the sensitivity of the weight function.
struct PrivacyBudget {
  double epsilon;
  double mu;
  PrivacyBudget(double epsilon_, double mu_);
};

// Parameters of the weight-release mechanism: per-edge Laplace noise at
// scale_s, then w' = (w + noise + tau) / p.
struct WeightReleaseParams {
  double scale_s;  // > 0
  double tau;      // >= 0
  double p;        // >= 1
};

// Sanitized weights are clamped into [kWeightFloor, kWeightCeil] so the
// clustering stage's (0,1] domain always holds; clamp events are counted
// and surfaced to callers.
inline constexpr double kWeightFloor = 1e-9;
inline constexpr double kWeightCeil = 1.0;

// One draw from Laplace(location, scale) by inverse CDF: with u uniform on
// (-1/2, 1/2), x = location - scale * sgn(u) * ln(1 - 2|u|).
double laplace_sample(RandomSource& rng, double location, double scale);

// Selection utility: u(w, r) = -|w(r) - min over the range|, <= 0, and 0
// exactly on range minimizers.
double utility_u(const WeightedGraph& g, std::span<const EdgeId> range_edges,
                 EdgeId r);

// Sensitivity of utility_u over mu-neighboring weight functions: 2 * mu.
// (w(r) moves by at most mu and the range minimum by at most mu.)
double utility_sensitivity(const PrivacyBudget& budget);

// Picks r from the range with probability proportional to
// exp(epsilon_step * u(r) / (2 * delta_u)). Sampling subtracts the maximum
// utility before exponentiation (softmax identity; distribution
// unchanged). The range is walked in the order given; callers pass
// ascending edge ids.
EdgeId exponential_mechanism(RandomSource& rng, const WeightedGraph& g,
                             std::span<const EdgeId> range_edges,
                             double epsilon_step, double delta_u);

struct WeightReleaseResult {
  SpanningTree tree;  // same topology, sanitized weights
  int clamp_count = 0;
};

// Independently transforms each tree-edge weight (ascending edge id):
// w' = (w + Lap(0, scale_s) + tau) / p, then clamps into (0, 1].
WeightReleaseResult weight_release(RandomSource& rng, const SpanningTree& t,
                                   const WeightReleaseParams& params);

}  // namespace privmst
