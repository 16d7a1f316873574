#include "breeder/canalization/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "breeder/error.hpp"

namespace breeder {

namespace {

int decimals_of(double step) {
  for (int d = 0; d <= 12; ++d) {
    const double scaled = step * std::pow(10.0, d);
    if (std::abs(scaled - std::round(scaled)) < 1e-9 * std::max(1.0, scaled)) return d;
  }
  return 12;
}

const ConnectionGene& swept_connection(const Genome& genome, Innovation connection) {
  const ConnectionGene* c = genome.find_connection(connection);
  if (c == nullptr) throw Error(ErrorCode::UnknownConnection, "connection " + std::to_string(connection));
  if (!c->enabled) throw Error(ErrorCode::DisabledConnection, "connection " + std::to_string(connection));
  return *c;
}

}  // namespace

std::vector<double> sweep_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo < hi)) {
    throw Error(ErrorCode::ParseError, "sweep needs lo < hi and step > 0");
  }
  const double scale = std::pow(10.0, decimals_of(step));
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 2);
  for (long k = 0; k <= steps; ++k) {
    grid.push_back(std::round((lo + static_cast<double>(k) * step) * scale) / scale);
  }
  if (grid.back() < hi - 1e-9 * step) grid.push_back(hi);
  return grid;
}

ImageBuffer sweep_frame(const Genome& genome, Innovation connection, double weight, int width, int height,
                        const EvalOptions& options) {
  swept_connection(genome, connection);
  Genome variant = genome;
  variant.find_connection(connection)->weight = weight;
  return render(variant, width, height, options);
}

SweepResult sweep(const Genome& genome, const SweepSpec& spec, const EvalOptions& options) {
  const ConnectionGene& c = swept_connection(genome, spec.connection);
  SweepResult result;
  result.spec = spec;
  result.baseline_weight = c.weight;
  result.baseline = render(genome, spec.width, spec.height, options);

  Genome variant = genome;
  ConnectionGene* slot = variant.find_connection(spec.connection);
  for (double w : sweep_grid(spec.lo, spec.hi, spec.step)) {
    slot->weight = w;
    result.frames.push_back({w, render(variant, spec.width, spec.height, options)});
  }
  result.impact = impact_map(result);
  return result;
}

double pixel_delta(const ImageBuffer& a, const ImageBuffer& b, std::size_t pixel) {
  const auto ch = static_cast<std::size_t>(a.channels);
  int best = 0;
  for (std::size_t c = 0; c < ch; ++c) {
    best = std::max(best, std::abs(int(a.data[pixel * ch + c]) - int(b.data[pixel * ch + c])));
  }
  return best / 255.0;
}

ImpactMap impact_map(const SweepResult& result, double threshold) {
  if (result.frames.empty()) throw Error(ErrorCode::TooSmall, "sweep has no frames");
  ImpactMap map;
  map.width = result.baseline.width;
  map.height = result.baseline.height;
  map.threshold = threshold;
  const auto pixels = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
  map.full_range.assign(pixels, 0.0);
  map.local_window.assign(pixels, 0.0);
  for (const auto& frame : result.frames) {
    const bool local = std::abs(frame.weight - result.baseline_weight) <= kLocalWindow + 1e-12;
    for (std::size_t p = 0; p < pixels; ++p) {
      const double d = pixel_delta(frame.image, result.baseline, p);
      map.full_range[p] = std::max(map.full_range[p], d);
      if (local) map.local_window[p] = std::max(map.local_window[p], d);
    }
  }
  const auto changed = std::count_if(map.local_window.begin(), map.local_window.end(),
                                     [threshold](double d) { return d > threshold; });
  map.changed_fraction = static_cast<double>(changed) / static_cast<double>(pixels);
  return map;
}

Json sweep_summary(const SweepResult& result) {
  auto max_of = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  Json weights = Json::array();
  for (const auto& f : result.frames) weights.push_back(f.weight);
  return Json{{"connection", result.spec.connection},
              {"lo", result.spec.lo},
              {"hi", result.spec.hi},
              {"step", result.spec.step},
              {"width", result.spec.width},
              {"height", result.spec.height},
              {"baseline_weight", result.baseline_weight},
              {"frame_count", result.frames.size()},
              {"weights", weights},
              {"impact",
               {{"threshold", result.impact.threshold},
                {"changed_fraction", result.impact.changed_fraction},
                {"full_range_max", max_of(result.impact.full_range)},
                {"full_range_mean", mean_of(result.impact.full_range)},
                {"local_window_max", max_of(result.impact.local_window)},
                {"local_window_mean", mean_of(result.impact.local_window)}}}};
}

}  // namespace breeder
