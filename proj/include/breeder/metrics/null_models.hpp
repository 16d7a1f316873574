#pragma once

#include <string>
#include <vector>

#include "breeder/cppn/genome_json.hpp"
#include "breeder/metrics/modularity.hpp"
#include "breeder/neat/mutation.hpp"

namespace breeder {

constexpr int kDefaultNullModels = 10;

struct NullModelConfig {
  int count = kDefaultNullModels;
  // Match total (enabled + disabled) connection counts instead of enabled ones.
  bool count_disabled = false;
  // Attempts per model before giving up with Error(Saturated).
  int max_restarts = 100;
};

struct NullModelBatch {
  std::string source_genome_id;
  std::string parent_genome_id;
  std::vector<Genome> models;
  NullModelConfig config;
};

struct GrowthPlan {
  std::size_t add_nodes = 0;
  std::size_t add_connections = 0;
};

// Number of add-node and add-connection mutations that turn the parent's
// counts into the source's. Throws Error(Infeasible) when no such mix exists.
GrowthPlan growth_plan(const Genome& source, const Genome& parent, const NullModelConfig& config = {});

// Each model is the parent grown by a shuffled sequence of the planned
// add-node and add-connection mutations, so it has exactly the source's node
// and connection counts. Weights are not mutated.
NullModelBatch null_models(const Genome& source, const Genome& parent, InnovationRegistry& registry, Rng& rng,
                           const NullModelConfig& config = {});

enum class Metric { Modularity, Hierarchy };

std::string_view to_string(Metric metric);

struct ResidualScore {
  Metric metric = Metric::Modularity;
  double raw = 0.0;
  double null_mean = 0.0;
  double residual = 0.0;  // raw - null_mean
};

// Optimal-split Q for modularity, reaching-centrality hierarchy otherwise.
double metric_value(Metric metric, const Genome& genome);

ResidualScore residual(Metric metric, const Genome& source, const NullModelBatch& batch);

Json to_json(const ResidualScore& score);

}  // namespace breeder
