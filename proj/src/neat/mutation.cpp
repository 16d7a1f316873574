#include "breeder/neat/mutation.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "breeder/error.hpp"

namespace breeder {

namespace {

double uniform_weight(Rng& rng) {
  return std::uniform_real_distribution<double>(kWeightMin, kWeightMax)(rng);
}

bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

using Adjacency = std::unordered_map<Innovation, std::vector<Innovation>>;

Adjacency enabled_adjacency(const Genome& genome) {
  Adjacency adj;
  for (const auto& c : genome.connections) {
    if (c.enabled) adj[c.source].push_back(c.target);
  }
  return adj;
}

bool reaches(const Adjacency& adj, Innovation from, Innovation to) {
  if (from == to) return true;
  std::unordered_set<Innovation> seen{from};
  std::vector<Innovation> stack{from};
  while (!stack.empty()) {
    const Innovation v = stack.back();
    stack.pop_back();
    auto it = adj.find(v);
    if (it == adj.end()) continue;
    for (Innovation w : it->second) {
      if (w == to) return true;
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return false;
}

}  // namespace

void MutationConfig::check() const {
  for (double p : {p_weight, p_add_connection, p_add_node}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::ParseError, "mutation probability outside [0, 1]");
  }
  if (!(weight_sigma > 0.0)) throw Error(ErrorCode::ParseError, "weight_sigma must be positive");
  if (!(weight_min < weight_max)) throw Error(ErrorCode::ParseError, "weight bounds are empty");
}

Json to_json(const MutationConfig& cfg) {
  return Json{{"p_weight", cfg.p_weight},
              {"p_add_connection", cfg.p_add_connection},
              {"p_add_node", cfg.p_add_node},
              {"weight_sigma", cfg.weight_sigma},
              {"weight_bounds", {cfg.weight_min, cfg.weight_max}}};
}

MutationConfig mutation_config_from_json(const Json& doc) {
  MutationConfig cfg;
  try {
    cfg.p_weight = doc.value("p_weight", cfg.p_weight);
    cfg.p_add_connection = doc.value("p_add_connection", cfg.p_add_connection);
    cfg.p_add_node = doc.value("p_add_node", cfg.p_add_node);
    cfg.weight_sigma = doc.value("weight_sigma", cfg.weight_sigma);
    if (doc.contains("weight_bounds")) {
      cfg.weight_min = doc.at("weight_bounds").at(0).get<double>();
      cfg.weight_max = doc.at("weight_bounds").at(1).get<double>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("mutation config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

double draw_replacement_weight(double old, double sigma, Rng& rng) {
  return std::normal_distribution<double>(old, sigma)(rng);
}

Genome mutate_weights(const Genome& genome, const MutationConfig& cfg, Rng& rng) {
  Genome out = genome;
  for (auto& c : out.connections) {
    if (!coin(rng, cfg.p_weight)) continue;
    c.weight = std::clamp(draw_replacement_weight(c.weight, cfg.weight_sigma, rng), cfg.weight_min,
                          cfg.weight_max);
  }
  return out;
}

AddConnectionResult mutate_add_connection(const Genome& genome, InnovationRegistry& registry, Rng& rng) {
  std::set<std::pair<Innovation, Innovation>> present;
  for (const auto& c : genome.connections) present.insert({c.source, c.target});
  const Adjacency adj = enabled_adjacency(genome);

  // Every legal pair is enumerated so the choice is exactly uniform and
  // saturation is reported only when no pair exists.
  std::vector<std::pair<Innovation, Innovation>> candidates;
  for (const auto& s : genome.nodes) {
    if (is_output(s.kind)) continue;
    for (const auto& t : genome.nodes) {
      if (is_input(t.kind) || s.innovation == t.innovation) continue;
      if (present.contains({s.innovation, t.innovation})) continue;
      if (reaches(adj, t.innovation, s.innovation)) continue;
      candidates.emplace_back(s.innovation, t.innovation);
    }
  }
  if (candidates.empty()) return {genome, true};

  const auto pick = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  Genome out = genome;
  const double weight = uniform_weight(rng);
  out.connections.push_back({registry.connection(pick.first, pick.second), pick.first, pick.second, weight, true});
  out.sort_genes();
  return {std::move(out), false};
}

AddNodeResult mutate_add_node(const Genome& genome, InnovationRegistry& registry, Rng& rng,
                              std::optional<Activation> activation) {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < genome.connections.size(); ++i) {
    if (genome.connections[i].enabled) enabled.push_back(i);
  }
  if (enabled.empty()) return {genome, false};

  Genome out = genome;
  ConnectionGene& split = out.connections[enabled[std::uniform_int_distribution<std::size_t>(0, enabled.size() - 1)(rng)]];
  if (!activation) {
    static constexpr Activation kHidden[] = {Activation::Sigmoid, Activation::Gaussian, Activation::Sine};
    activation = kHidden[std::uniform_int_distribution<int>(0, 2)(rng)];
  }
  split.enabled = false;
  const ConnectionGene old = split;

  const Innovation node = registry.split_node(
      old.innovation, [&](Innovation id) { return out.find_node(id) != nullptr; });
  out.nodes.push_back({node, NodeKind::Hidden, *activation});
  out.connections.push_back({registry.connection(old.source, node), old.source, node, 1.0, true});
  out.connections.push_back({registry.connection(node, old.target), node, old.target, old.weight, true});
  out.sort_genes();
  return {std::move(out), true};
}

Genome mutate(const Genome& genome, const MutationConfig& cfg, InnovationRegistry& registry, Rng& rng) {
  Genome out = mutate_weights(genome, cfg, rng);
  if (coin(rng, cfg.p_add_connection)) out = mutate_add_connection(out, registry, rng).genome;
  if (coin(rng, cfg.p_add_node)) out = mutate_add_node(out, registry, rng).genome;
  return out;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
  if (a.palette != b.palette) {
    throw Error(ErrorCode::PaletteMismatch, "cannot cross " + std::string(to_string(a.palette)) +
                                                " with " + std::string(to_string(b.palette)));
  }
  auto pick = [&rng](const auto* from_a, const auto* from_b) {
    if (from_a && from_b) return std::bernoulli_distribution(0.5)(rng) ? *from_a : *from_b;
    return from_a ? *from_a : *from_b;
  };

  Genome child;
  child.palette = a.palette;

  std::set<Innovation> node_ids;
  for (const auto& n : a.nodes) node_ids.insert(n.innovation);
  for (const auto& n : b.nodes) node_ids.insert(n.innovation);
  for (Innovation id : node_ids) child.nodes.push_back(pick(a.find_node(id), b.find_node(id)));

  std::set<Innovation> conn_ids;
  for (const auto& c : a.connections) conn_ids.insert(c.innovation);
  for (const auto& c : b.connections) conn_ids.insert(c.innovation);
  Adjacency admitted;
  for (Innovation id : conn_ids) {
    ConnectionGene gene = pick(a.find_connection(id), b.find_connection(id));
    if (gene.enabled) {
      if (reaches(admitted, gene.target, gene.source)) {
        gene.enabled = false;
      } else {
        admitted[gene.source].push_back(gene.target);
      }
    }
    child.connections.push_back(gene);
  }
  return child;
}

Genome seed_genome(Palette palette, InnovationRegistry& registry, Rng& rng) {
  Genome g;
  g.palette = palette;
  g.nodes = {
      {node_ids::kX, NodeKind::InputX, Activation::Identity},
      {node_ids::kY, NodeKind::InputY, Activation::Identity},
      {node_ids::kD, NodeKind::InputD, Activation::Identity},
      {node_ids::kBias, NodeKind::InputBias, Activation::Identity},
      {node_ids::kIntensity, NodeKind::OutputIntensity, Activation::Sigmoid},
  };
  if (palette == Palette::Color) {
    g.nodes.push_back({node_ids::kHue, NodeKind::OutputHue, Activation::Sigmoid});
    g.nodes.push_back({node_ids::kSaturation, NodeKind::OutputSaturation, Activation::Sigmoid});
  }
  std::vector<Innovation> outputs{node_ids::kIntensity};
  if (palette == Palette::Color) {
    outputs.push_back(node_ids::kHue);
    outputs.push_back(node_ids::kSaturation);
  }
  for (Innovation out : outputs) {
    for (Innovation in : {node_ids::kX, node_ids::kY, node_ids::kD, node_ids::kBias}) {
      g.connections.push_back({registry.connection(in, out), in, out, uniform_weight(rng), true});
    }
  }
  g.sort_genes();
  return g;
}

}  // namespace breeder
