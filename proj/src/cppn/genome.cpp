#include "breeder/cppn/genome.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "breeder/error.hpp"

namespace breeder {

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 8> kKindNames{{
    {NodeKind::InputX, "input_x"},
    {NodeKind::InputY, "input_y"},
    {NodeKind::InputD, "input_d"},
    {NodeKind::InputBias, "input_bias"},
    {NodeKind::Hidden, "hidden"},
    {NodeKind::OutputIntensity, "output_intensity"},
    {NodeKind::OutputHue, "output_hue"},
    {NodeKind::OutputSaturation, "output_saturation"},
}};

constexpr std::array<std::pair<Activation, std::string_view>, 4> kActivationNames{{
    {Activation::Identity, "identity"},
    {Activation::Sigmoid, "sigmoid"},
    {Activation::Gaussian, "gaussian"},
    {Activation::Sine, "sine"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum v) {
  for (const auto& [e, name] : table) {
    if (e == v) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum parse_name(const std::array<std::pair<Enum, std::string_view>, N>& table, std::string_view s,
                std::string_view what) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  throw Error(ErrorCode::ParseError, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename Genes>
auto find_by_innovation(Genes& genes, Innovation innovation) -> decltype(genes.data()) {
  auto it = std::lower_bound(genes.begin(), genes.end(), innovation,
                             [](const auto& g, Innovation v) { return g.innovation < v; });
  if (it != genes.end() && it->innovation == innovation) return &*it;
  // Fall back to a scan for genomes that were assembled out of order.
  for (auto& g : genes) {
    if (g.innovation == innovation) return &g;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(NodeKind kind) { return name_of(kKindNames, kind); }
std::string_view to_string(Activation fn) { return name_of(kActivationNames, fn); }
std::string_view to_string(Palette palette) { return palette == Palette::Gray ? "gray" : "color"; }

NodeKind node_kind_from_string(std::string_view s) { return parse_name(kKindNames, s, "node kind"); }
Activation activation_from_string(std::string_view s) {
  return parse_name(kActivationNames, s, "activation");
}
Palette palette_from_string(std::string_view s) {
  if (s == "gray") return Palette::Gray;
  if (s == "color") return Palette::Color;
  throw Error(ErrorCode::ParseError, "unknown palette '" + std::string(s) + "'");
}

const NodeGene* Genome::find_node(Innovation innovation) const {
  return find_by_innovation(nodes, innovation);
}

const ConnectionGene* Genome::find_connection(Innovation innovation) const {
  return find_by_innovation(connections, innovation);
}

ConnectionGene* Genome::find_connection(Innovation innovation) {
  return find_by_innovation(connections, innovation);
}

const ConnectionGene* Genome::find_pair(Innovation source, Innovation target) const {
  for (const auto& c : connections) {
    if (c.source == source && c.target == target) return &c;
  }
  return nullptr;
}

std::size_t Genome::enabled_connection_count() const {
  return static_cast<std::size_t>(
      std::count_if(connections.begin(), connections.end(), [](const auto& c) { return c.enabled; }));
}

Innovation Genome::max_innovation() const {
  Innovation best = 0;
  for (const auto& n : nodes) best = std::max(best, n.innovation);
  for (const auto& c : connections) best = std::max(best, c.innovation);
  return best;
}

void Genome::sort_genes() {
  std::sort(nodes.begin(), nodes.end(),
            [](const auto& a, const auto& b) { return a.innovation < b.innovation; });
  std::sort(connections.begin(), connections.end(),
            [](const auto& a, const auto& b) { return a.innovation < b.innovation; });
}

std::optional<std::vector<Innovation>> topological_order(const Genome& genome) {
  std::map<Innovation, std::size_t> indegree;
  std::map<Innovation, std::vector<Innovation>> out;
  for (const auto& n : genome.nodes) indegree[n.innovation] = 0;
  for (const auto& c : genome.connections) {
    if (!c.enabled) continue;
    if (!indegree.contains(c.source) || !indegree.contains(c.target)) continue;
    ++indegree[c.target];
    out[c.source].push_back(c.target);
  }

  std::priority_queue<Innovation, std::vector<Innovation>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<Innovation> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    const Innovation id = ready.top();
    ready.pop();
    order.push_back(id);
    for (Innovation t : out[id]) {
      if (--indegree[t] == 0) ready.push(t);
    }
  }
  if (order.size() != indegree.size()) return std::nullopt;
  return order;
}

std::vector<Violation> validate(const Genome& genome) {
  std::vector<Violation> violations;
  auto report = [&](std::string rule, std::string detail) {
    violations.push_back({std::move(rule), std::move(detail)});
  };

  std::unordered_map<Innovation, NodeKind> kinds;
  std::map<NodeKind, int> kind_counts;
  for (const auto& n : genome.nodes) {
    if (!kinds.emplace(n.innovation, n.kind).second) {
      report("unique_node_innovation", "node " + std::to_string(n.innovation) + " duplicated");
    }
    ++kind_counts[n.kind];
    if (is_input(n.kind) && n.activation != Activation::Identity) {
      report("input_identity", "input node " + std::to_string(n.innovation) +
                                   " has activation " + std::string(to_string(n.activation)));
    }
  }

  for (NodeKind k : {NodeKind::InputX, NodeKind::InputY, NodeKind::InputD, NodeKind::InputBias,
                     NodeKind::OutputIntensity}) {
    if (kind_counts[k] != 1) {
      report("node_kinds", std::string(to_string(k)) + " count is " +
                               std::to_string(kind_counts[k]) + ", expected 1");
    }
  }
  const int want_color = genome.palette == Palette::Color ? 1 : 0;
  for (NodeKind k : {NodeKind::OutputHue, NodeKind::OutputSaturation}) {
    if (kind_counts[k] != want_color) {
      report("node_kinds", std::string(to_string(k)) + " count is " +
                               std::to_string(kind_counts[k]) + ", expected " +
                               std::to_string(want_color) + " for palette " +
                               std::string(to_string(genome.palette)));
    }
  }

  std::set<Innovation> conn_ids;
  std::set<std::pair<Innovation, Innovation>> pairs;
  for (const auto& c : genome.connections) {
    const std::string tag = "connection " + std::to_string(c.innovation);
    if (!conn_ids.insert(c.innovation).second) report("unique_connection_innovation", tag + " duplicated");
    if (!pairs.insert({c.source, c.target}).second) {
      report("unique_pair", tag + " repeats pair " + std::to_string(c.source) + "->" +
                                std::to_string(c.target));
    }
    if (!(c.weight >= kWeightMin && c.weight <= kWeightMax)) {
      report("weight_range", tag + " weight " + std::to_string(c.weight) + " outside [-3, 3]");
    }
    auto src = kinds.find(c.source);
    auto dst = kinds.find(c.target);
    if (src == kinds.end() || dst == kinds.end()) {
      report("dangling_connection", tag + " references a missing node");
      continue;
    }
    if (is_output(src->second)) report("source_kind", tag + " starts at an output node");
    if (is_input(dst->second)) report("target_kind", tag + " ends at an input node");
  }

  if (!topological_order(genome)) report("acyclic", "enabled connections form a cycle");

  // Orphan check over all genes, enabled or not.
  std::unordered_map<Innovation, std::vector<Innovation>> fwd;
  std::unordered_map<Innovation, std::vector<Innovation>> bwd;
  for (const auto& c : genome.connections) {
    fwd[c.source].push_back(c.target);
    bwd[c.target].push_back(c.source);
  }
  auto flood = [](const std::vector<Innovation>& seeds,
                  std::unordered_map<Innovation, std::vector<Innovation>>& adj) {
    std::set<Innovation> seen(seeds.begin(), seeds.end());
    std::vector<Innovation> stack(seeds.begin(), seeds.end());
    while (!stack.empty()) {
      const Innovation v = stack.back();
      stack.pop_back();
      for (Innovation w : adj[v]) {
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return seen;
  };
  std::vector<Innovation> inputs;
  std::vector<Innovation> outputs;
  for (const auto& n : genome.nodes) {
    if (is_input(n.kind)) inputs.push_back(n.innovation);
    if (is_output(n.kind)) outputs.push_back(n.innovation);
  }
  const auto from_inputs = flood(inputs, fwd);
  const auto to_outputs = flood(outputs, bwd);
  for (const auto& n : genome.nodes) {
    if (n.kind != NodeKind::Hidden) continue;
    if (!from_inputs.contains(n.innovation) || !to_outputs.contains(n.innovation)) {
      report("orphan_hidden", "hidden node " + std::to_string(n.innovation) +
                                  " is not on an input-to-output path");
    }
  }
  return violations;
}

void require_valid(const Genome& genome) {
  const auto violations = validate(genome);
  if (violations.empty()) return;
  std::string msg = "genome '" + genome.id + "':";
  for (const auto& v : violations) msg += " [" + v.rule + "] " + v.detail + ";";
  throw Error(ErrorCode::InvalidGenome, msg);
}

}  // namespace breeder
