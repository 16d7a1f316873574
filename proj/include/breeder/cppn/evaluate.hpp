#pragma once

#include <optional>
#include <vector>

#include "breeder/cppn/genome.hpp"

namespace breeder {

// Shape constants of the bipolar activations. Every function maps the reals
// onto [-1, 1] so any node can be shown on the red/black/white scale.
struct ActivationParams {
  double sigmoid_slope = 4.9;  // sigmoid(z) = 2 / (1 + exp(-slope z)) - 1
  double gaussian_width = 2.5;  // gaussian(z) = 2 exp(-(width z)^2) - 1
  double sine_frequency = 2.0;  // sine(z) = sin(frequency z)
};

struct EvalOptions {
  ActivationParams activation;
  // Drive only x and y; the d and bias inputs read as 0.
  bool strict_two_input = false;
};

double activate(Activation fn, double z, const ActivationParams& params = {});

struct OutputValues {
  double intensity = 0.0;
  std::optional<double> hue;
  std::optional<double> saturation;

  bool operator==(const OutputValues&) const = default;
};

// A genome flattened into an evaluation schedule: nodes in Kahn order (ties by
// innovation) with their enabled incoming edges resolved to slot indices.
// Construction validates the genome; evaluation is then allocation-free apart
// from the caller's scratch buffer and safe to share across threads.
class CompiledCppn {
 public:
  explicit CompiledCppn(const Genome& genome, EvalOptions options = {});

  OutputValues evaluate(double x, double y) const;

  // Fills `values` (one entry per node, in schedule order) for a coordinate.
  void evaluate_all(double x, double y, std::vector<double>& values) const;

  // Schedule index of a node; throws Error(UnknownNode).
  std::size_t slot_of(Innovation node) const;
  std::size_t node_count() const { return steps_.size(); }
  Palette palette() const { return palette_; }

 private:
  struct Edge {
    std::size_t from;
    double weight;
  };
  struct Step {
    Innovation innovation;
    NodeKind kind;
    Activation activation;
    std::size_t first_edge;
    std::size_t edge_count;
  };

  OutputValues read_outputs(const std::vector<double>& values) const;

  Palette palette_;
  EvalOptions options_;
  std::vector<Step> steps_;
  std::vector<Edge> edges_;
  std::size_t intensity_slot_ = 0;
  std::optional<std::size_t> hue_slot_;
  std::optional<std::size_t> saturation_slot_;
};

OutputValues evaluate(const Genome& genome, double x, double y, const EvalOptions& options = {});

}  // namespace breeder
