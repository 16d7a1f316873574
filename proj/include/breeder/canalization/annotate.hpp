#pragma once

#include <map>
#include <string>

#include "breeder/canalization/labels.hpp"
#include "breeder/cppn/genome.hpp"

namespace breeder {

inline constexpr Rgb kNeutralEdge{0x99, 0x99, 0x99};
inline constexpr Rgb kNeutralNode{0xdd, 0xdd, 0xdd};

struct AnnotatedExport {
  std::string svg;    // layered drawing, inputs at the bottom, outputs on top
  Json decomposition;  // {"groups": [{"name", "connections": [ids]}]}
};

// Node -> module id, e.g. from a modularity partition. When given, nodes get a
// module-colored outline so the labeled decomposition can be compared with
// the detected modules.
using ModuleOverlay = std::map<Innovation, int>;

AnnotatedExport annotate_export(const Genome& genome, const LabelStore& store,
                                const ModuleOverlay& modules = {});

// Layer of each node: inputs 0, other nodes one above their deepest enabled
// predecessor, outputs on a shared top layer.
std::map<Innovation, int> layer_depths(const Genome& genome);

Json label_decomposition(const LabelStore& store);

}  // namespace breeder
