#pragma once

// Hand-built genome fixtures and random generators shared by the test suites.

#include <initializer_list>
#include <random>
#include <vector>

#include "breeder/cppn/genome.hpp"
#include "breeder/neat/mutation.hpp"

namespace breeder::testing {

// The four inputs plus one intensity output with the given activation; no
// connections.
inline Genome bare_gray(Activation output = Activation::Identity) {
  Genome g;
  g.id = "fixture";
  g.palette = Palette::Gray;
  g.nodes = {{node_ids::kX, NodeKind::InputX, Activation::Identity},
             {node_ids::kY, NodeKind::InputY, Activation::Identity},
             {node_ids::kD, NodeKind::InputD, Activation::Identity},
             {node_ids::kBias, NodeKind::InputBias, Activation::Identity},
             {node_ids::kIntensity, NodeKind::OutputIntensity, output}};
  return g;
}

inline void add_hidden(Genome& g, Innovation id, Activation fn) {
  g.nodes.push_back({id, NodeKind::Hidden, fn});
  g.sort_genes();
}

inline void link(Genome& g, Innovation id, Innovation from, Innovation to, double w, bool enabled = true) {
  g.connections.push_back({id, from, to, w, enabled});
  g.sort_genes();
}

// x -> output, weight 1, identity output: o(x, y) = x.
inline Genome x_passthrough() {
  Genome g = bare_gray();
  link(g, 100, node_ids::kX, node_ids::kIntensity, 1.0);
  return g;
}

// Random valid genome grown from a seed by `steps` structural mutations.
inline Genome grown(Palette palette, InnovationRegistry& registry, Rng& rng, int steps) {
  Genome g = seed_genome(palette, registry, rng);
  for (int i = 0; i < steps; ++i) {
    if (std::bernoulli_distribution(0.5)(rng)) {
      g = mutate_add_node(g, registry, rng).genome;
    } else {
      g = mutate_add_connection(g, registry, rng).genome;
    }
  }
  return g;
}

}  // namespace breeder::testing
