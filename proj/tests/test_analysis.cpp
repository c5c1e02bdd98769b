#include <doctest.h>

#include <cmath>

#include "privmst/analysis.hpp"
#include "privmst/datagen.hpp"
#include "test_support.hpp"

using namespace privmst;
using namespace privmst::testing;

namespace {

PlantedInstance path6_instance() {
  GenerationParams params;
  params.shape = "fixture";
  params.n = 6;
  return PlantedInstance{path6_graph(), path6_partition(), {0.9}, params, {}};
}

PlantedInstance seven_edge_instance() {
  GenerationParams params;
  params.shape = "fixture";
  params.n = 6;
  return PlantedInstance{seven_edge_graph(), seven_edge_partition(), {0.95, 0.92},
                         params, {}};
}

}  // namespace

TEST_CASE("partition agreement") {
  SUBCASE("identical partitions") {
    NodePartition a({1, 1, 2, 2});
    NodePartition b({2, 2, 1, 1});  // same blocks, swapped labels
    auto rep = partition_agreement(a, b);
    CHECK(rep.exact_match);
    CHECK(rep.adjusted_rand_index == doctest::Approx(1.0));
  }
  SUBCASE("crossed pairs give ari -0.5") {
    auto rep = partition_agreement(NodePartition({1, 1, 2, 2}),
                                   NodePartition({1, 2, 1, 2}));
    CHECK(!rep.exact_match);
    CHECK(rep.adjusted_rand_index == doctest::Approx(-0.5));
  }
  SUBCASE("singletons against one cluster give ari 0") {
    auto rep = partition_agreement(NodePartition({1, 2, 3, 4}),
                                   NodePartition({1, 1, 1, 1}));
    CHECK(rep.adjusted_rand_index == doctest::Approx(0.0));
  }
  SUBCASE("node-count mismatch is an error") {
    CHECK_THROWS_AS(partition_agreement(NodePartition({1, 1}), NodePartition({1, 1, 1})),
                    std::invalid_argument);
  }
}

TEST_CASE("singleton-excluded agreement") {
  // Found partition isolates node 5; the rest matches the reference.
  NodePartition reference({1, 1, 1, 2, 2, 2});
  NodePartition found({1, 1, 1, 2, 2, 3});
  auto plain = partition_agreement(reference, found);
  CHECK(plain.adjusted_rand_index < 1.0);
  auto excl = partition_agreement_excluding_singletons(reference, found);
  CHECK(excl.exact_match);
  CHECK(excl.adjusted_rand_index == doctest::Approx(1.0));

  // All-singleton found partitions have nothing left to match.
  auto none = partition_agreement_excluding_singletons(
      NodePartition({1, 1, 2, 2}), NodePartition({1, 2, 3, 4}));
  CHECK(none.adjusted_rand_index == doctest::Approx(0.0));
}

TEST_CASE("topology bound") {
  SUBCASE("limits on the 6-node path instance") {
    auto inst = path6_instance();
    const double delta_u = 0.2;
    // Large budget drives both variants to 1 (the path's alpha spread is 0,
    // so only the epsilon-free factors remain for theorem_text).
    auto pf_inf = topology_bound(inst, 1e9, delta_u, BoundVariant::proof_form);
    CHECK(pf_inf.bound_value == doctest::Approx(0.2));
    // theorem_text at eps -> 0: 1 - 4 exp(-ln 5 / 2); proof_form: 1 - 4/5.
    auto tt0 = topology_bound(inst, 0.0, delta_u, BoundVariant::theorem_text);
    CHECK(tt0.bound_value == doctest::Approx(-0.7888543819998319).epsilon(1e-12));
    CHECK(tt0.vacuous);
    auto pf0 = topology_bound(inst, 0.0, delta_u, BoundVariant::proof_form);
    CHECK(pf0.bound_value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(!pf0.vacuous);
  }
  SUBCASE("large budget drives the 7-edge instance to 1") {
    auto inst = seven_edge_instance();
    for (auto variant : {BoundVariant::theorem_text, BoundVariant::proof_form}) {
      auto rep = topology_bound(inst, 1e9, 0.2, variant);
      CHECK(rep.bound_value == doctest::Approx(1.0));
    }
  }
  SUBCASE("7-edge instance at eps 20 matches the frozen recomputation") {
    auto inst = seven_edge_instance();
    auto tt = topology_bound(inst, 20.0, 0.2, BoundVariant::theorem_text);
    CHECK(tt.bound_value == doctest::Approx(0.9994928281785221).epsilon(1e-12));
    auto pf = topology_bound(inst, 20.0, 0.2, BoundVariant::proof_form);
    CHECK(pf.bound_value == doctest::Approx(0.99980830706977).epsilon(1e-12));
    REQUIRE(tt.clusters.size() == 2);
    for (const auto& c : tt.clusters) {
      CHECK(c.alpha_bar == doctest::Approx(3.0));
      CHECK(c.max_intra == doctest::Approx(0.3));
      CHECK(c.min_intra == doctest::Approx(0.1));
      CHECK(c.alpha_from_enumeration);
    }
  }
}

TEST_CASE("topology probability estimates") {
  auto inst = path6_instance();
  SUBCASE("large budget always yields a partitioning topology") {
    auto summary = estimate_topology_probability(inst, 1e6, 0.1, 200, RandomSource(4));
    CHECK(summary.frequency == doctest::Approx(1.0));
  }
  SUBCASE("frequency never undercuts the bounds (both variants)") {
    for (double eps : {1.0, 5.0, 20.0}) {
      auto summary = estimate_topology_probability(inst, eps, 0.1, 2000, RandomSource(5));
      CHECK(summary.frequency >= 0.0);
      CHECK(summary.frequency <= 1.0);
      for (auto variant : {BoundVariant::theorem_text, BoundVariant::proof_form}) {
        auto bound = topology_bound(inst, eps, 0.2, variant);
        double floor = std::max(0.0, bound.bound_value);
        CHECK(summary.frequency + 3.0 * summary.std_error >= floor);
      }
    }
  }
  SUBCASE("7-edge instance at eps 20 stays above both bounds") {
    auto seven = seven_edge_instance();
    auto summary = estimate_topology_probability(seven, 20.0, 0.1, 2000, RandomSource(6));
    for (auto variant : {BoundVariant::theorem_text, BoundVariant::proof_form}) {
      auto bound = topology_bound(seven, 20.0, 0.2, variant);
      CHECK(summary.frequency + 3.0 * summary.std_error >= bound.bound_value);
    }
  }
}

TEST_CASE("separability preservation") {
  auto inst = path6_instance();
  SpanningTree mst = minimum_spanning_tree(inst.graph);
  SUBCASE("tiny noise preserves separability with certainty") {
    auto est = estimate_separability_preservation(inst, mst, 1, {1e-8, 1.0, 4.0},
                                                  500, RandomSource(7), 20000);
    CHECK(est.preserved.frequency == doctest::Approx(1.0));
    // phi collapses to (0.3)^2 - 0.3 * 0.475 = -0.0525 < 0.
    CHECK(est.e_phi == doctest::Approx(0.3 * 0.3 - 0.3 * 0.475).epsilon(1e-3));
    CHECK(!est.vacuous);
    CHECK(est.chebyshev_bound == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("frequency dominates the chebyshev bound when non-vacuous") {
    for (double s : {0.01, 0.05}) {
      auto est = estimate_separability_preservation(inst, mst, 1, {s, 1.0, 4.0},
                                                    10000, RandomSource(8), 100000);
      if (!est.vacuous)
        CHECK(est.preserved.frequency + 3.0 * est.preserved.std_error >=
              est.chebyshev_bound);
    }
  }
  SUBCASE("growing noise weakly lowers the estimated bound") {
    double prev = 1.0;
    for (double s : {0.005, 0.01, 0.02, 0.04, 0.08}) {
      auto est = estimate_separability_preservation(inst, mst, 1, {s, 1.0, 4.0},
                                                    200, RandomSource(9), 50000);
      CHECK(est.chebyshev_bound <= prev + 0.02);  // monotone within error bars
      prev = est.chebyshev_bound;
    }
  }
  SUBCASE("non-separable inputs are rejected") {
    auto bad = make_graph(4, {{0, 1, 0.1}, {1, 2, 0.3}, {2, 3, 0.5}});
    GenerationParams params;
    params.shape = "fixture";
    PlantedInstance bad_inst{bad, NodePartition({1, 1, 1, 2}), {0.5}, params, {}};
    SpanningTree t = minimum_spanning_tree(bad);
    CHECK_THROWS_AS(estimate_separability_preservation(bad_inst, t, 1,
                                                       {0.01, 1.0, 4.0}, 10,
                                                       RandomSource(10), 1000),
                    std::invalid_argument);
  }
}

TEST_CASE("cluster definition check") {
  auto inst = generate_planted_partition(11, {4, 5}, 3, 1, 0.1, 0.3);
  std::vector<NodeId> everyone(inst.graph.topology->node_count());
  for (NodeId v = 0; v < inst.graph.topology->node_count(); ++v) everyone[v] = v;
  auto members = inst.partition.members();

  SUBCASE("planted clusters qualify") {
    CHECK(check_cluster_definition(inst.graph, everyone, members[0]));
    CHECK(check_cluster_definition(inst.graph, everyone, members[1]));
  }
  SUBCASE("two-node sets never qualify") {
    std::vector<NodeId> pair = {members[0][0], members[0][1]};
    CHECK(!check_cluster_definition(inst.graph, everyone, pair));
  }
  SUBCASE("sets mixing two clusters fail") {
    std::vector<NodeId> mixed = {members[0][0], members[0][1], members[1][0],
                                 members[1][1]};
    CHECK(!check_cluster_definition(inst.graph, everyone, mixed));
  }
  SUBCASE("size cap") {
    std::vector<NodeId> big(16, 0);
    CHECK_THROWS_AS(check_cluster_definition(inst.graph, everyone, big),
                    std::invalid_argument);
  }
  SUBCASE("qualifying clusters also pass mst path containment") {
    SpanningTree mst = minimum_spanning_tree(inst.graph);
    for (const auto& cluster : members) {
      if (!check_cluster_definition(inst.graph, everyone, cluster)) continue;
      for (std::size_t i = 0; i < cluster.size(); ++i)
        for (std::size_t j = i + 1; j < cluster.size(); ++j)
          for (NodeId hop : tree_path(mst, cluster[i], cluster[j]))
            CHECK(inst.partition.label_of(hop) ==
                  inst.partition.label_of(cluster[i]));
    }
  }
}

TEST_CASE("mechanism privacy audit") {
  std::vector<double> range = {0.2, 0.5, 0.8};
  SUBCASE("identical weights give zero ratio") {
    CHECK(mechanism_privacy_audit(range, 1.0, 0.1, std::vector<double>{0.0}) == doctest::Approx(0.0));
  }
  SUBCASE("four-edge range at the full-mu perturbation") {
    std::vector<double> four = {0.15, 0.3, 0.55, 0.9};
    std::vector<double> extremes = {-0.1, 0.0, 0.1};
    for (double eps : {0.5, 1.0}) {
      double worst = mechanism_privacy_audit(four, eps, 0.1, extremes);
      CHECK(worst <= eps + 1e-9);
      CHECK(worst > 0.0);
    }
  }
  SUBCASE("bounded by eps over the 5^3 grid") {
    std::vector<double> deltas = {-0.1, -0.05, 0.0, 0.05, 0.1};
    for (double eps : {0.5, 1.0, 2.0}) {
      double worst = mechanism_privacy_audit(range, eps, 0.1, deltas);
      CHECK(worst <= eps + 1e-9);
      CHECK(worst > 0.0);
    }
  }
  SUBCASE("swapping the pair flips the sign only") {
    // ratio(w, w') and ratio(w', w) have the same magnitude; the audit
    // reports |log ratio| so a base-vs-shifted grid equals the reverse.
    std::vector<double> shifted = {0.3, 0.4, 0.9};
    double forward = mechanism_privacy_audit(shifted, 1.0, 0.1, std::vector<double>{-0.1});
    std::vector<double> reverse_base = {0.2, 0.3, 0.8};
    double backward = mechanism_privacy_audit(reverse_base, 1.0, 0.1, std::vector<double>{0.1});
    CHECK(forward == doctest::Approx(backward).epsilon(1e-12));
  }
  SUBCASE("deltas beyond mu are rejected") {
    CHECK_THROWS_AS(mechanism_privacy_audit(range, 1.0, 0.1, std::vector<double>{0.2}),
                    std::invalid_argument);
  }
}

TEST_CASE("restrict partition relabels contiguously") {
  NodePartition p({1, 2, 3, 2, 1});
  std::vector<NodeId> kept = {1, 3, 4};
  NodePartition r = restrict_partition(p, kept);
  CHECK(r.node_count() == 3);
  CHECK(r.cluster_count() == 2);
  CHECK(r.label_of(0) == r.label_of(1));
  CHECK(r.label_of(0) != r.label_of(2));
}
