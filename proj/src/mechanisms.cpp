#include "privmst/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace privmst {

PrivacyBudget::PrivacyBudget(double epsilon_, double mu_)
    : epsilon(epsilon_), mu(mu_) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("privacy budget: epsilon must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("privacy budget: mu must be positive");
}

double laplace_sample(RandomSource& rng, double location, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("laplace: scale must be positive");
  double u = rng.next_unit_open() - 0.5;  // (-1/2, 1/2)
  double sign = (u < 0.0) ? -1.0 : 1.0;
  return location - scale * sign * std::log(1.0 - 2.0 * std::fabs(u));
}

double utility_u(const WeightedGraph& g, std::span<const EdgeId> range_edges,
                 EdgeId r) {
  if (range_edges.empty())
    throw std::invalid_argument("utility: empty range");
  bool r_in_range = false;
  double min_w = std::numeric_limits<double>::infinity();
  for (EdgeId e : range_edges) {
    min_w = std::min(min_w, g.weight(e));
    r_in_range = r_in_range || (e == r);
  }
  if (!r_in_range)
    throw std::invalid_argument("utility: edge " + std::to_string(r) +
                                " is not in the range");
  return -std::fabs(g.weight(r) - min_w);
}

double utility_sensitivity(const PrivacyBudget& budget) { return 2.0 * budget.mu; }

EdgeId exponential_mechanism(RandomSource& rng, const WeightedGraph& g,
                             std::span<const EdgeId> range_edges,
                             double epsilon_step, double delta_u) {
  if (range_edges.empty())
    throw std::invalid_argument("exponential mechanism: empty range");
  if (!(epsilon_step > 0.0) || !(delta_u > 0.0))
    throw std::invalid_argument("exponential mechanism: epsilon and delta_u must be positive");

  double min_w = std::numeric_limits<double>::infinity();
  for (EdgeId e : range_edges) min_w = std::min(min_w, g.weight(e));

  // score(r) = eps * u(r) / (2 delta_u) with u(r) = min_w - w(r) <= 0. The
  // maximum score is 0 (attained on minimizers), so exp never overflows.
  const double coeff = epsilon_step / (2.0 * delta_u);
  std::vector<double> mass(range_edges.size());
  double total = 0.0;
  for (std::size_t i = 0; i < range_edges.size(); ++i) {
    double u = min_w - g.weight(range_edges[i]);
    if (!std::isfinite(u))
      throw std::invalid_argument("exponential mechanism: non-finite utility");
    mass[i] = std::exp(coeff * u);
    total += mass[i];
  }
  double draw = rng.next_unit() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < range_edges.size(); ++i) {
    acc += mass[i];
    if (draw < acc) return range_edges[i];
  }
  return range_edges.back();
}

WeightReleaseResult weight_release(RandomSource& rng, const SpanningTree& t,
                                   const WeightReleaseParams& params) {
  if (!t.has_weights())
    throw std::invalid_argument("weight release: tree carries no weights");
  if (!(params.scale_s > 0.0))
    throw std::invalid_argument("weight release: scale must be positive");
  if (params.tau < 0.0)
    throw std::invalid_argument("weight release: tau must be nonnegative");
  if (params.p < 1.0)
    throw std::invalid_argument("weight release: p must be at least 1");

  std::vector<double> sanitized(t.edge_count());
  int clamped = 0;
  auto raw = t.weights();
  for (int i = 0; i < t.edge_count(); ++i) {  // ascending edge id
    double noise = laplace_sample(rng, 0.0, params.scale_s);
    double w = (raw[i] + noise + params.tau) / params.p;
    if (w < kWeightFloor) {
      w = kWeightFloor;
      ++clamped;
    } else if (w > kWeightCeil) {
      w = kWeightCeil;
      ++clamped;
    }
    sanitized[i] = w;
  }
  return WeightReleaseResult{t.with_weights(std::move(sanitized)), clamped};
}

}  // namespace privmst
