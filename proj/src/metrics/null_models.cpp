#include "breeder/metrics/null_models.hpp"

#include <algorithm>

#include "breeder/error.hpp"
#include "breeder/metrics/hierarchy.hpp"

namespace breeder {

namespace {

std::size_t counted_connections(const Genome& g, const NullModelConfig& config) {
  return config.count_disabled ? g.connections.size() : g.enabled_connection_count();
}

}  // namespace

GrowthPlan growth_plan(const Genome& source, const Genome& parent, const NullModelConfig& config) {
  const auto sn = static_cast<long long>(source.nodes.size());
  const auto pn = static_cast<long long>(parent.nodes.size());
  const auto sc = static_cast<long long>(counted_connections(source, config));
  const auto pc = static_cast<long long>(counted_connections(parent, config));
  const long long dn = sn - pn;
  const long long dc = sc - pc;
  // An add-node adds one enabled connection net (two genes, one disabled).
  const long long per_node = config.count_disabled ? 2 : 1;
  if (dn < 0 || dc < per_node * dn) {
    throw Error(ErrorCode::Infeasible, "source (" + std::to_string(sn) + " nodes, " + std::to_string(sc) +
                                           " connections) cannot be grown from parent (" + std::to_string(pn) +
                                           " nodes, " + std::to_string(pc) + " connections)");
  }
  return {static_cast<std::size_t>(dn), static_cast<std::size_t>(dc - per_node * dn)};
}

NullModelBatch null_models(const Genome& source, const Genome& parent, InnovationRegistry& registry, Rng& rng,
                           const NullModelConfig& config) {
  const GrowthPlan plan = growth_plan(source, parent, config);
  registry.observe(parent);
  registry.observe(source);

  NullModelBatch batch{source.id, parent.id, {}, config};
  std::vector<bool> steps(plan.add_nodes, true);
  steps.insert(steps.end(), plan.add_connections, false);

  for (int k = 0; k < config.count; ++k) {
    bool built = false;
    for (int attempt = 0; attempt < config.max_restarts && !built; ++attempt) {
      std::shuffle(steps.begin(), steps.end(), rng);
      Genome model = parent;
      built = true;
      for (bool add_node : steps) {
        if (add_node) {
          auto r = mutate_add_node(model, registry, rng);
          if (!r.added) {
            built = false;
            break;
          }
          model = std::move(r.genome);
        } else {
          auto r = mutate_add_connection(model, registry, rng);
          if (r.saturated) {
            built = false;
            break;
          }
          model = std::move(r.genome);
        }
      }
      if (built) {
        model.id = source.id + "/null" + std::to_string(k);
        batch.models.push_back(std::move(model));
      }
    }
    if (!built) {
      throw Error(ErrorCode::Saturated, "could not grow null model " + std::to_string(k) + " for '" + source.id +
                                            "' within " + std::to_string(config.max_restarts) + " attempts");
    }
  }
  return batch;
}

std::string_view to_string(Metric metric) { return metric == Metric::Modularity ? "modularity" : "hierarchy"; }

double metric_value(Metric metric, const Genome& genome) {
  const DirectedGraph graph = genome_to_graph(genome).graph;
  return metric == Metric::Modularity ? optimal_partition(graph).q : grc_hierarchy(graph);
}

ResidualScore residual(Metric metric, const Genome& source, const NullModelBatch& batch) {
  if (batch.models.empty()) throw Error(ErrorCode::TooSmall, "null-model batch is empty");
  ResidualScore score;
  score.metric = metric;
  score.raw = metric_value(metric, source);
  double total = 0.0;
  for (const auto& model : batch.models) total += metric_value(metric, model);
  score.null_mean = total / static_cast<double>(batch.models.size());
  score.residual = score.raw - score.null_mean;
  return score;
}

Json to_json(const ResidualScore& score) {
  return Json{{"metric", std::string(to_string(score.metric))},
              {"raw", score.raw},
              {"null_mean", score.null_mean},
              {"residual", score.residual}};
}

}  // namespace breeder
