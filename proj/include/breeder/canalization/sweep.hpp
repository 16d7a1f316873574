#pragma once

#include <utility>
#include <vector>

#include "breeder/cppn/evaluate.hpp"
#include "breeder/cppn/genome.hpp"
#include "breeder/cppn/genome_json.hpp"
#include "breeder/cppn/image.hpp"

namespace breeder {

constexpr double kCoarseStep = 0.1;
constexpr double kFineStep = 0.01;
constexpr double kDefaultImpactThreshold = 0.05;
// Frames further than this from the original weight are left out of the local
// impact window.
constexpr double kLocalWindow = 1.0;

struct SweepSpec {
  Innovation connection = 0;
  double lo = kWeightMin;
  double hi = kWeightMax;
  double step = kCoarseStep;
  int width = 64;
  int height = 64;

  static SweepSpec fine(Innovation connection) {
    SweepSpec s;
    s.connection = connection;
    s.step = kFineStep;
    return s;
  }
};

// Weight grid lo, lo + step, ..., hi. Each value is rounded to the decimal
// precision of `step` so that coarse grid points coincide exactly with fine
// ones; hi closes the grid even when step does not divide the range.
std::vector<double> sweep_grid(double lo, double hi, double step);

struct ImpactMap {
  int width = 0;
  int height = 0;
  std::vector<double> full_range;    // max |brightness delta| over every frame
  std::vector<double> local_window;  // same, frames within kLocalWindow of the baseline
  double threshold = kDefaultImpactThreshold;
  double changed_fraction = 0.0;     // share of pixels with local_window > threshold
};

struct SweepFrame {
  double weight;
  ImageBuffer image;
};

struct SweepResult {
  SweepSpec spec;
  double baseline_weight = 0.0;
  ImageBuffer baseline;
  std::vector<SweepFrame> frames;
  ImpactMap impact;
};

// Renders the genome once per grid weight with only the swept connection's
// weight substituted. The genome itself is not modified.
SweepResult sweep(const Genome& genome, const SweepSpec& spec, const EvalOptions& options = {});

// Single frame of a sweep; used by the service to stream frames lazily.
ImageBuffer sweep_frame(const Genome& genome, Innovation connection, double weight, int width, int height,
                        const EvalOptions& options = {});

ImpactMap impact_map(const SweepResult& result, double threshold = kDefaultImpactThreshold);

// Per-pixel brightness delta in [0, 1]; for RGB the largest channel delta.
double pixel_delta(const ImageBuffer& a, const ImageBuffer& b, std::size_t pixel);

// Summary without pixel data: grid, baseline and impact statistics.
Json sweep_summary(const SweepResult& result);

}  // namespace breeder
