#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "breeder/error.hpp"
#include "breeder/metrics/hierarchy.hpp"
#include "breeder/metrics/modularity.hpp"
#include "breeder/metrics/null_models.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace breeder {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

TEST(DirectedGraph, RejectsLoopsAndDuplicates) {
  EXPECT_EQ(code_of([] { DirectedGraph(2, {{0, 0}}); }), ErrorCode::InvalidGenome);
  EXPECT_EQ(code_of([] { DirectedGraph(2, {{0, 1}, {0, 1}}); }), ErrorCode::InvalidGenome);
  EXPECT_EQ(code_of([] { DirectedGraph(2, {{0, 2}}); }), ErrorCode::InvalidGenome);
}

TEST(GenomeToGraph, SeedAndDisabled) {
  InnovationRegistry registry;
  Rng rng(1);
  Genome g = seed_genome(Palette::Gray, registry, rng);
  auto gg = genome_to_graph(g);
  EXPECT_EQ(gg.graph.node_count(), 5u);
  EXPECT_EQ(gg.graph.edge_count(), 4u);
  g.connections[1].enabled = false;
  gg = genome_to_graph(g);
  EXPECT_EQ(gg.graph.node_count(), 5u);
  EXPECT_EQ(gg.graph.edge_count(), 3u);
}

TEST(GenomeToGraph, AcyclicForValidGenomes) {
  InnovationRegistry registry;
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const auto gg = genome_to_graph(testing::grown(Palette::Color, registry, rng, 10));
    const auto r = oracle::transitive_closure(gg.graph);
    for (std::size_t v = 0; v < gg.graph.node_count(); ++v) EXPECT_FALSE(r[v][v]);
  }
}

TEST(Modularity, SingleModuleIsZero) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto g = oracle::random_digraph(rng, 2 + rng() % 10, 0.4);
    if (g.edge_count() == 0) continue;
    EXPECT_EQ(modularity_q(g, Partition::single(g.node_count())), 0.0);
  }
}

TEST(Modularity, TwoTriangles) {
  const auto g = oracle::two_triangles();
  EXPECT_DOUBLE_EQ(modularity_q(g, {{0, 0, 0, 1, 1, 1}}), 0.5);
  const auto bf = brute_force_partition(g);
  EXPECT_NEAR(bf.q, 0.5, 1e-12);
  EXPECT_EQ(bf.partition, (Partition{{0, 0, 0, 1, 1, 1}}));
  const auto sp = optimal_partition(g);
  EXPECT_NEAR(sp.q, 0.5, 1e-9);
  EXPECT_EQ(sp.partition.module_count(), 2);
  EXPECT_EQ(sp.partition.assignment[0], sp.partition.assignment[2]);
  EXPECT_NE(sp.partition.assignment[0], sp.partition.assignment[3]);
}

TEST(Modularity, SingletonsFormula) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto g = oracle::random_digraph(rng, 2 + rng() % 8, 0.35);
    if (g.edge_count() == 0) continue;
    std::vector<int> own(g.node_count());
    std::iota(own.begin(), own.end(), 0);
    double expected = 0.0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      expected -= static_cast<double>(g.in_degree(v) * g.out_degree(v));
    }
    const double m = static_cast<double>(g.edge_count());
    expected /= m * m;
    EXPECT_NEAR(modularity_q(g, {own}), expected, 1e-12);
    EXPECT_LE(modularity_q(g, {own}), 0.0);
  }
}

TEST(Modularity, MatchesDirectSumOnRandomPartitions) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto g = oracle::random_digraph(rng, 2 + rng() % 10, 0.3);
    if (g.edge_count() == 0) continue;
    std::vector<int> c(g.node_count());
    for (auto& x : c) x = static_cast<int>(rng() % 4);
    const double q = modularity_q(g, {c});
    EXPECT_NEAR(q, oracle::modularity(g, c), 1e-12);
    EXPECT_GE(q, -1.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(Modularity, EmptyGraphErrors) {
  const DirectedGraph g(3, {});
  EXPECT_EQ(code_of([&] { modularity_q(g, Partition::single(3)); }), ErrorCode::EmptyGraph);
  EXPECT_EQ(code_of([&] { optimal_partition(g); }), ErrorCode::EmptyGraph);
  EXPECT_EQ(code_of([&] { brute_force_partition(g); }), ErrorCode::EmptyGraph);
}

TEST(BruteForce, SingleEdgeIsZero) {
  const DirectedGraph g(2, {{0, 1}});
  const auto bf = brute_force_partition(g);
  EXPECT_EQ(bf.q, 0.0);
  EXPECT_EQ(bf.partition.module_count(), 1);
  // The split scores -k_a^in k_a^out / m^2 - k_b^in k_b^out / m^2 = 0 as well,
  // so the first (single-module) partition is kept.
  EXPECT_EQ(modularity_q(g, {{0, 1}}), 0.0);
}

TEST(BruteForce, EnumeratesBellNumberPartitions) {
  // On a graph where every partition has a distinct numerator the maximizer
  // must equal the best over a naive 4^n labelling enumeration.
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const auto g = oracle::random_digraph(rng, n, 0.5);
    if (g.edge_count() == 0) continue;
    double best = -2.0;
    std::vector<int> c(n, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t x = code;
      for (std::size_t i = 0; i < n; ++i) {
        c[i] = static_cast<int>(x % n);
        x /= n;
      }
      best = std::max(best, oracle::modularity(g, c));
    }
    EXPECT_NEAR(brute_force_partition(g).q, best, 1e-12);
  }
}

TEST(BruteForce, TooLarge) {
  EXPECT_EQ(code_of([] { brute_force_partition(oracle::chain(13)); }), ErrorCode::TooLarge);
}

TEST(OptimalPartition, CompleteDigraphStaysWhole) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < 4; ++u) {
    for (std::size_t v = 0; v < 4; ++v) {
      if (u != v) edges.emplace_back(u, v);
    }
  }
  const DirectedGraph g(4, edges);
  EXPECT_NEAR(brute_force_partition(g).q, 0.0, 1e-12);
  const auto sp = optimal_partition(g);
  EXPECT_EQ(sp.partition.module_count(), 1);
  EXPECT_EQ(sp.q, 0.0);
}

TEST(OptimalPartition, BoundedByBruteForce) {
  std::mt19937_64 rng(7);
  int tested = 0;
  while (tested < 100) {
    const auto g = oracle::random_digraph(rng, 2 + rng() % 7, 0.15 + 0.35 * static_cast<double>(rng() % 100) / 100);
    if (g.edge_count() == 0) continue;
    ++tested;
    const double bf = brute_force_partition(g).q;
    const auto sp = optimal_partition(g);
    EXPECT_LE(sp.q, bf + 1e-12);
    EXPECT_GE(sp.q, bf - 0.05);
    EXPECT_GE(sp.q, -1e-12);
    EXPECT_NEAR(sp.q, modularity_q(g, sp.partition), 1e-15);
  }
}

TEST(OptimalPartition, Deterministic) {
  std::mt19937_64 rng(8);
  const auto g = oracle::random_digraph(rng, 20, 0.15);
  EXPECT_EQ(optimal_partition(g).partition, optimal_partition(g).partition);
}

TEST(Hierarchy, EdgelessIsZero) { EXPECT_EQ(grc_hierarchy(DirectedGraph(5, {})), 0.0); }

TEST(Hierarchy, ChainFormula) {
  for (std::size_t n = 2; n <= 10; ++n) {
    const double expected = static_cast<double>(n) / (2.0 * static_cast<double>(n - 1));
    EXPECT_NEAR(grc_hierarchy(oracle::chain(n)), expected, 1e-12) << n;
    EXPECT_NEAR(oracle::hierarchy(oracle::chain(n)), expected, 1e-12) << n;
  }
  EXPECT_DOUBLE_EQ(grc_hierarchy(oracle::chain(3)), 0.75);
}

TEST(Hierarchy, OutStar) {
  for (std::size_t n = 3; n <= 9; ++n) {
    std::vector<Edge> edges;
    for (std::size_t leaf = 1; leaf < n; ++leaf) edges.emplace_back(0, leaf);
    const DirectedGraph g(n, edges);
    // Reversed: each leaf reaches the root (1/(n-1)); the root reaches nothing.
    const double k = static_cast<double>(n - 1);
    EXPECT_NEAR(grc_hierarchy(g), (1.0 / k) / k, 1e-12);
    EXPECT_NEAR(grc_hierarchy(g), oracle::hierarchy(g), 1e-12);
  }
}

TEST(Hierarchy, MatchesClosureOracleOnRandomDags) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    const auto g = oracle::random_dag(rng, 2 + rng() % 14, 0.3);
    const double h = grc_hierarchy(g);
    EXPECT_NEAR(h, oracle::hierarchy(g), 1e-12);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
  }
}

TEST(Hierarchy, RelabelingInvariant) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + rng() % 10;
    const auto g = oracle::random_dag(rng, n, 0.3);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> relabeled;
    for (const auto& [u, v] : g.edges()) relabeled.emplace_back(perm[u], perm[v]);
    EXPECT_NEAR(grc_hierarchy(g), grc_hierarchy(DirectedGraph(n, relabeled)), 1e-12);
  }
}

TEST(Hierarchy, ShortcutEdgeChangesNothing) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + rng() % 9;
    const auto g = oracle::random_dag(rng, n, 0.3);
    const auto r = oracle::transitive_closure(g);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (!r[u][v] || g.has_edge(u, v)) continue;
        auto edges = g.edges();
        edges.emplace_back(u, v);
        EXPECT_NEAR(grc_hierarchy(DirectedGraph(n, edges)), grc_hierarchy(g), 1e-12);
      }
    }
  }
}

TEST(Hierarchy, TooSmall) { EXPECT_EQ(code_of([] { grc_hierarchy(DirectedGraph(1, {})); }), ErrorCode::TooSmall); }

TEST(NullModels, SourceEqualsParent) {
  InnovationRegistry registry;
  Rng rng(12);
  const Genome parent = testing::grown(Palette::Gray, registry, rng, 4);
  const auto batch = null_models(parent, parent, registry, rng);
  ASSERT_EQ(batch.models.size(), 10u);
  for (const auto& m : batch.models) EXPECT_TRUE(m.same_genes(parent));
}

TEST(NullModels, SingleSplit) {
  InnovationRegistry registry;
  Rng rng(13);
  const Genome parent = seed_genome(Palette::Gray, registry, rng);
  const Genome source = mutate_add_node(parent, registry, rng).genome;
  const auto batch = null_models(source, parent, registry, rng);
  for (const auto& m : batch.models) {
    EXPECT_EQ(m.nodes.size(), parent.nodes.size() + 1);
    EXPECT_EQ(m.connections.size(), parent.connections.size() + 2);
    EXPECT_EQ(m.enabled_connection_count(), parent.enabled_connection_count() + 1);
  }
}

TEST(NullModels, Infeasible) {
  InnovationRegistry registry;
  Rng rng(14);
  const Genome parent = seed_genome(Palette::Gray, registry, rng);
  Genome source = mutate_add_node(parent, registry, rng).genome;
  // One more node but no net enabled connection: disable one gene.
  for (auto& c : source.connections) {
    if (c.enabled && c.target == node_ids::kIntensity && c.source < node_ids::kFirstFree) {
      c.enabled = false;
      break;
    }
  }
  EXPECT_EQ(code_of([&] { null_models(source, parent, registry, rng); }), ErrorCode::Infeasible);
  EXPECT_EQ(code_of([&] { null_models(parent, source, registry, rng); }), ErrorCode::Infeasible);
}

TEST(NullModels, CountDisabledFlag) {
  InnovationRegistry registry;
  Rng rng(15);
  const Genome parent = seed_genome(Palette::Color, registry, rng);
  Genome source = mutate_add_node(parent, registry, rng).genome;
  source = mutate_add_node(source, registry, rng).genome;
  NullModelConfig cfg;
  cfg.count_disabled = true;
  const auto plan = growth_plan(source, parent, cfg);
  EXPECT_EQ(plan.add_nodes, 2u);
  EXPECT_EQ(plan.add_connections, 0u);
  const auto batch = null_models(source, parent, registry, rng, cfg);
  for (const auto& m : batch.models) EXPECT_EQ(m.connections.size(), source.connections.size());
}

TEST(NullModels, SaturatedParentErrors) {
  // Gray seed is fully connected; asking for one extra connection is impossible.
  InnovationRegistry registry;
  Rng rng(16);
  const Genome parent = seed_genome(Palette::Gray, registry, rng);
  Genome source = parent;
  // Only the counts matter to the plan; this gene is never validated.
  source.connections.push_back({999, node_ids::kX, node_ids::kY, 0.0, true});
  NullModelConfig cfg;
  cfg.max_restarts = 3;
  EXPECT_EQ(code_of([&] { null_models(source, parent, registry, rng, cfg); }), ErrorCode::Saturated);
}

TEST(NullModels, MatchCountsAndValidity) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    InnovationRegistry registry;
    Rng rng(seed);
    const Genome parent = testing::grown(seed % 2 ? Palette::Color : Palette::Gray, registry, rng,
                                         static_cast<int>(seed % 5));
    Genome child = parent;
    for (int i = 0; i < 1 + static_cast<int>(seed % 7); ++i) {
      child = rng() % 2 ? mutate_add_node(child, registry, rng).genome
                        : mutate_add_connection(child, registry, rng).genome;
    }
    const auto batch = null_models(child, parent, registry, rng);
    for (const auto& m : batch.models) {
      EXPECT_EQ(m.nodes.size(), child.nodes.size());
      EXPECT_EQ(m.enabled_connection_count(), child.enabled_connection_count());
      EXPECT_TRUE(validate(m).empty());
    }
  }
}

TEST(Residual, IdenticalCopiesGiveZero) {
  InnovationRegistry registry;
  Rng rng(17);
  const Genome g = testing::grown(Palette::Color, registry, rng, 6);
  NullModelBatch batch{g.id, g.id, std::vector<Genome>(10, g), {}};
  for (Metric metric : {Metric::Modularity, Metric::Hierarchy}) {
    const auto r = residual(metric, g, batch);
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_EQ(r.residual, r.raw - r.null_mean);
  }
}

// Color genome whose structure splits cleanly into {x, y -> intensity} and
// {d, bias -> hue, saturation}: every added gene stays inside its group.
Genome modular_fixture(InnovationRegistry& registry, const Genome& seed) {
  Genome g = seed;
  auto connect = [&](Innovation from, Innovation to, double w) {
    g.connections.push_back({registry.connection(from, to), from, to, w, true});
    g.sort_genes();
  };
  auto split = [&](Innovation from, Innovation to) {
    ConnectionGene* c = g.find_connection(g.find_pair(from, to)->innovation);
    c->enabled = false;
    const double w = c->weight;
    const Innovation n = registry.split_node(c->innovation, [&](Innovation id) { return g.find_node(id); });
    g.nodes.push_back({n, NodeKind::Hidden, Activation::Sigmoid});
    connect(from, n, 1.0);
    connect(n, to, w);
    return n;
  };
  const Innovation a1 = split(node_ids::kX, node_ids::kIntensity);
  const Innovation a2 = split(node_ids::kY, node_ids::kIntensity);
  const Innovation b1 = split(node_ids::kD, node_ids::kHue);
  const Innovation b2 = split(node_ids::kBias, node_ids::kSaturation);
  connect(node_ids::kX, a2, 0.5);
  connect(node_ids::kY, a1, 0.5);
  connect(a1, a2, 0.5);
  connect(node_ids::kD, b2, 0.5);
  connect(node_ids::kBias, b1, 0.5);
  connect(b1, b2, 0.5);
  connect(b1, node_ids::kSaturation, 0.5);
  connect(b2, node_ids::kHue, 0.5);
  return g;
}

TEST(Residual, ModularFixtureBeatsNulls) {
  int positive = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    InnovationRegistry registry;
    Rng rng(1000 + trial);
    const Genome parent = seed_genome(Palette::Color, registry, rng);
    const Genome source = modular_fixture(registry, parent);
    ASSERT_TRUE(validate(source).empty());
    const auto batch = null_models(source, parent, registry, rng);
    positive += residual(Metric::Modularity, source, batch).residual > 0;
  }
  EXPECT_GE(positive, 45);
}

TEST(Residual, NullScoredAgainstSiblingsIsCentered) {
  double total_q = 0.0, total_h = 0.0;
  constexpr int kTrials = 200;
  for (int trial = 0; trial < kTrials; ++trial) {
    InnovationRegistry registry;
    Rng rng(static_cast<std::uint64_t>(trial));
    const Genome parent = testing::grown(Palette::Gray, registry, rng, 2);
    Genome child = parent;
    for (int i = 0; i < 6; ++i) {
      child = i % 2 ? mutate_add_node(child, registry, rng).genome : mutate_add_connection(child, registry, rng).genome;
    }
    NullModelConfig cfg;
    cfg.count = 11;
    auto batch = null_models(child, parent, registry, rng, cfg);
    const Genome probe = batch.models.front();
    batch.models.erase(batch.models.begin());
    total_q += residual(Metric::Modularity, probe, batch).residual;
    total_h += residual(Metric::Hierarchy, probe, batch).residual;
  }
  EXPECT_NEAR(total_q / kTrials, 0.0, 0.01);
  EXPECT_NEAR(total_h / kTrials, 0.0, 0.01);
}

}  // namespace
}  // namespace breeder
