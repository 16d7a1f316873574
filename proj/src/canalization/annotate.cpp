#include "breeder/canalization/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace breeder {

namespace {

constexpr double kLayerGap = 90.0;
constexpr double kNodeGap = 70.0;
constexpr double kMargin = 40.0;
constexpr double kRadius = 14.0;

const Rgb kModulePalette[] = {{0x1f, 0x77, 0xb4}, {0xd6, 0x27, 0x28}, {0x2c, 0xa0, 0x2c}, {0xff, 0x7f, 0x0e},
                              {0x94, 0x67, 0xbd}, {0x8c, 0x56, 0x4b}, {0xe3, 0x77, 0xc2}, {0x17, 0xbe, 0xcf}};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::map<Innovation, int> layer_depths(const Genome& genome) {
  std::map<Innovation, int> depth;
  const auto order = topological_order(genome);
  std::vector<Innovation> sequence;
  if (order) {
    sequence = *order;
  } else {
    for (const auto& n : genome.nodes) sequence.push_back(n.innovation);
  }
  for (Innovation id : sequence) {
    const NodeGene* n = genome.find_node(id);
    int d = is_input(n->kind) ? 0 : 1;
    for (const auto& c : genome.connections) {
      if (c.enabled && c.target == id && depth.contains(c.source)) d = std::max(d, depth[c.source] + 1);
    }
    depth[id] = d;
  }
  int top = 1;
  for (const auto& n : genome.nodes) {
    if (!is_output(n.kind)) top = std::max(top, depth[n.innovation] + 1);
  }
  for (const auto& n : genome.nodes) {
    if (is_output(n.kind)) depth[n.innovation] = top;
  }
  return depth;
}

Json label_decomposition(const LabelStore& store) {
  std::map<std::string, std::vector<Innovation>> groups;
  for (const auto& [id, label] : store.labels) groups[label.name].push_back(id);
  Json out = Json::array();
  for (const auto& [name, ids] : groups) out.push_back({{"name", name}, {"connections", ids}});
  return Json{{"groups", out}};
}

AnnotatedExport annotate_export(const Genome& genome, const LabelStore& store, const ModuleOverlay& modules) {
  const auto depth = layer_depths(genome);
  int top = 0;
  for (const auto& [id, d] : depth) top = std::max(top, d);

  std::map<int, std::vector<Innovation>> layers;
  for (const auto& n : genome.nodes) layers[depth.at(n.innovation)].push_back(n.innovation);
  std::size_t widest = 1;
  for (const auto& [d, ids] : layers) widest = std::max(widest, ids.size());

  const double width = 2 * kMargin + kNodeGap * static_cast<double>(widest - 1);
  const double height = 2 * kMargin + kLayerGap * top;
  std::map<Innovation, std::pair<double, double>> pos;
  for (const auto& [d, ids] : layers) {
    const double span = kNodeGap * static_cast<double>(ids.size() - 1);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      pos[ids[i]] = {(width - span) / 2 + kNodeGap * static_cast<double>(i), height - kMargin - kLayerGap * d};
    }
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const auto& c : genome.connections) {
    auto label = store.labels.find(c.innovation);
    const Rgb color = label == store.labels.end() ? kNeutralEdge : label->second.color;
    const auto [x1, y1] = pos.at(c.source);
    const auto [x2, y2] = pos.at(c.target);
    svg << "<line data-connection=\"" << c.innovation << "\" x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1)
        << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << to_hex(color)
        << "\" stroke-width=\"" << fmt(1.0 + std::min(std::abs(c.weight), 3.0)) << "\"";
    if (!c.enabled) svg << " stroke-dasharray=\"4 3\" opacity=\"0.5\"";
    if (label != store.labels.end()) svg << "><title>" << xml_escape(label->second.name) << "</title></line>\n";
    else svg << "/>\n";
  }
  for (const auto& n : genome.nodes) {
    const auto label = node_label(genome, store, n.innovation);
    const auto [x, y] = pos.at(n.innovation);
    svg << "<circle data-node=\"" << n.innovation << "\" cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\""
        << fmt(kRadius) << "\" fill=\"" << to_hex(label ? label->color : kNeutralNode) << "\"";
    if (auto m = modules.find(n.innovation); m != modules.end()) {
      const Rgb ring = kModulePalette[static_cast<std::size_t>(m->second) % std::size(kModulePalette)];
      svg << " stroke=\"" << to_hex(ring) << "\" stroke-width=\"4\" data-module=\"" << m->second << "\"";
    } else {
      svg << " stroke=\"#333333\" stroke-width=\"1\"";
    }
    svg << "/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y + 4) << "\" font-size=\"10\" text-anchor=\"middle\">"
        << xml_escape(std::string(to_string(n.activation)).substr(0, 3)) << "</text>\n";
  }
  svg << "</svg>\n";
  return {svg.str(), label_decomposition(store)};
}

}  // namespace breeder
