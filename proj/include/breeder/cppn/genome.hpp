#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace breeder {

// Historical marking shared by node and connection genes.
using Innovation = std::uint64_t;

enum class NodeKind {
  InputX,
  InputY,
  InputD,
  InputBias,
  Hidden,
  OutputIntensity,
  OutputHue,
  OutputSaturation,
};

enum class Activation { Identity, Sigmoid, Gaussian, Sine };

enum class Palette { Gray, Color };

std::string_view to_string(NodeKind kind);
std::string_view to_string(Activation fn);
std::string_view to_string(Palette palette);
NodeKind node_kind_from_string(std::string_view s);
Activation activation_from_string(std::string_view s);
Palette palette_from_string(std::string_view s);

constexpr bool is_input(NodeKind k) {
  return k == NodeKind::InputX || k == NodeKind::InputY || k == NodeKind::InputD ||
         k == NodeKind::InputBias;
}
constexpr bool is_output(NodeKind k) {
  return k == NodeKind::OutputIntensity || k == NodeKind::OutputHue ||
         k == NodeKind::OutputSaturation;
}

constexpr double kWeightMin = -3.0;
constexpr double kWeightMax = 3.0;

// Fixed historical markings of the interface nodes. Every genome uses them, so
// seeds from any registry align under crossover.
namespace node_ids {
constexpr Innovation kX = 0;
constexpr Innovation kY = 1;
constexpr Innovation kD = 2;
constexpr Innovation kBias = 3;
constexpr Innovation kIntensity = 4;
constexpr Innovation kHue = 5;
constexpr Innovation kSaturation = 6;
constexpr Innovation kFirstFree = 7;
}  // namespace node_ids

struct NodeGene {
  Innovation innovation = 0;
  NodeKind kind = NodeKind::Hidden;
  Activation activation = Activation::Identity;

  bool operator==(const NodeGene&) const = default;
};

struct ConnectionGene {
  Innovation innovation = 0;
  Innovation source = 0;
  Innovation target = 0;
  double weight = 0.0;
  bool enabled = true;

  bool operator==(const ConnectionGene&) const = default;
};

// A CPPN genome. Nodes and connections are kept sorted by innovation; the
// mutation operators and the JSON reader maintain that order.
struct Genome {
  std::string id;
  Palette palette = Palette::Gray;
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;

  const NodeGene* find_node(Innovation innovation) const;
  const ConnectionGene* find_connection(Innovation innovation) const;
  ConnectionGene* find_connection(Innovation innovation);
  const ConnectionGene* find_pair(Innovation source, Innovation target) const;

  std::size_t enabled_connection_count() const;
  Innovation max_innovation() const;

  void sort_genes();

  // Structural and weight equality; the id is ignored.
  bool same_genes(const Genome& other) const {
    return palette == other.palette && nodes == other.nodes && connections == other.connections;
  }
};

// File-level wrapper carrying the publication metadata that travels with a
// genome in the JSON document family.
struct GenomeDocument {
  Genome genome;
  std::optional<std::string> parent_id;
  std::string title;
  std::string author;
};

struct Violation {
  std::string rule;
  std::string detail;
};

// Returns every violated genome invariant; an empty list means the genome is
// valid.
std::vector<Violation> validate(const Genome& genome);

// Throws Error(InvalidGenome) listing the violations when the genome is not
// valid.
void require_valid(const Genome& genome);

// Kahn order over enabled connections; ties broken by ascending innovation.
// Returns std::nullopt when the enabled subgraph has a cycle.
std::optional<std::vector<Innovation>> topological_order(const Genome& genome);

}  // namespace breeder
