#include "breeder/cppn/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "breeder/error.hpp"

namespace breeder {

double activate(Activation fn, double z, const ActivationParams& params) {
  switch (fn) {
    case Activation::Identity:
      return std::clamp(z, -1.0, 1.0);
    case Activation::Sigmoid:
      return 2.0 / (1.0 + std::exp(-params.sigmoid_slope * z)) - 1.0;
    case Activation::Gaussian: {
      const double s = params.gaussian_width * z;
      return 2.0 * std::exp(-s * s) - 1.0;
    }
    case Activation::Sine:
      return std::sin(params.sine_frequency * z);
  }
  return 0.0;
}

CompiledCppn::CompiledCppn(const Genome& genome, EvalOptions options)
    : palette_(genome.palette), options_(options) {
  require_valid(genome);
  const auto order = topological_order(genome);  // valid => acyclic

  std::unordered_map<Innovation, std::size_t> slot;
  for (std::size_t i = 0; i < order->size(); ++i) slot[(*order)[i]] = i;

  std::vector<std::vector<Edge>> incoming(order->size());
  for (const auto& c : genome.connections) {
    if (!c.enabled) continue;
    incoming[slot.at(c.target)].push_back({slot.at(c.source), c.weight});
  }

  steps_.reserve(order->size());
  for (std::size_t i = 0; i < order->size(); ++i) {
    const NodeGene* node = genome.find_node((*order)[i]);
    // Summation order fixed by source slot so results are reproducible.
    std::sort(incoming[i].begin(), incoming[i].end(),
              [](const Edge& a, const Edge& b) { return a.from < b.from; });
    steps_.push_back({node->innovation, node->kind, node->activation, edges_.size(), incoming[i].size()});
    edges_.insert(edges_.end(), incoming[i].begin(), incoming[i].end());
    switch (node->kind) {
      case NodeKind::OutputIntensity: intensity_slot_ = i; break;
      case NodeKind::OutputHue: hue_slot_ = i; break;
      case NodeKind::OutputSaturation: saturation_slot_ = i; break;
      default: break;
    }
  }
}

void CompiledCppn::evaluate_all(double x, double y, std::vector<double>& values) const {
  values.assign(steps_.size(), 0.0);
  const bool radial = !options_.strict_two_input;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& step = steps_[i];
    switch (step.kind) {
      case NodeKind::InputX: values[i] = x; continue;
      case NodeKind::InputY: values[i] = y; continue;
      case NodeKind::InputD: values[i] = radial ? std::sqrt(x * x + y * y) : 0.0; continue;
      case NodeKind::InputBias: values[i] = radial ? 1.0 : 0.0; continue;
      default: break;
    }
    double sum = 0.0;
    for (std::size_t e = step.first_edge; e < step.first_edge + step.edge_count; ++e) {
      sum += edges_[e].weight * values[edges_[e].from];
    }
    values[i] = activate(step.activation, sum, options_.activation);
  }
}

OutputValues CompiledCppn::read_outputs(const std::vector<double>& values) const {
  OutputValues out;
  out.intensity = values[intensity_slot_];
  if (hue_slot_) out.hue = values[*hue_slot_];
  if (saturation_slot_) out.saturation = values[*saturation_slot_];
  return out;
}

OutputValues CompiledCppn::evaluate(double x, double y) const {
  std::vector<double> values;
  evaluate_all(x, y, values);
  return read_outputs(values);
}

std::size_t CompiledCppn::slot_of(Innovation node) const {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (steps_[i].innovation == node) return i;
  }
  throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node));
}

OutputValues evaluate(const Genome& genome, double x, double y, const EvalOptions& options) {
  return CompiledCppn(genome, options).evaluate(x, y);
}

}  // namespace breeder
