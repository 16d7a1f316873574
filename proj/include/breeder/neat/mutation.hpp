#pragma once

#include <optional>
#include <random>

#include "breeder/cppn/genome.hpp"
#include "breeder/cppn/genome_json.hpp"
#include "breeder/neat/registry.hpp"

namespace breeder {

using Rng = std::mt19937_64;

struct MutationConfig {
  double p_weight = 0.3;          // per connection
  double p_add_connection = 0.1;  // per offspring
  double p_add_node = 0.06;       // per offspring
  double weight_sigma = 1.0;      // replacement draw ~ Normal(old, sigma^2)
  double weight_min = kWeightMin;
  double weight_max = kWeightMax;

  // Throws Error(ParseError) when a probability leaves [0, 1] or sigma <= 0.
  void check() const;

  bool operator==(const MutationConfig&) const = default;
};

Json to_json(const MutationConfig& cfg);
MutationConfig mutation_config_from_json(const Json& doc);

// Unclamped replacement weight for a connection whose current weight is `old`.
double draw_replacement_weight(double old, double sigma, Rng& rng);

Genome mutate_weights(const Genome& genome, const MutationConfig& cfg, Rng& rng);

struct AddConnectionResult {
  Genome genome;
  bool saturated = false;  // no legal pair existed; genome returned unchanged
};

// Adds one enabled connection between a uniformly chosen legal (source, target)
// pair with a uniform weight in [-3, 3].
AddConnectionResult mutate_add_connection(const Genome& genome, InnovationRegistry& registry, Rng& rng);

struct AddNodeResult {
  Genome genome;
  bool added = false;
};

// Splits a uniformly chosen enabled connection u->v (weight w): disables it and
// adds u->n (weight 1) and n->v (weight w). `activation` forces the new node's
// function; otherwise it is drawn from {sigmoid, gaussian, sine}.
AddNodeResult mutate_add_node(const Genome& genome, InnovationRegistry& registry, Rng& rng,
                              std::optional<Activation> activation = std::nullopt);

// Weight mutation followed by the two structural mutations, each applied with
// its configured probability.
Genome mutate(const Genome& genome, const MutationConfig& cfg, InnovationRegistry& registry, Rng& rng);

// Aligns parents by innovation. Matched genes come from either parent with
// probability 1/2, unmatched genes are always inherited. Connections are then
// admitted in ascending innovation order; an enabled gene that would close a
// cycle among the already admitted enabled genes is inherited disabled.
Genome crossover(const Genome& a, const Genome& b, Rng& rng);

// Minimal genome: every input wired to every output, uniform weights in [-3, 3],
// no hidden nodes.
Genome seed_genome(Palette palette, InnovationRegistry& registry, Rng& rng);

}  // namespace breeder
