#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "breeder/canalization/annotate.hpp"
#include "breeder/canalization/labels.hpp"
#include "breeder/canalization/sweep.hpp"
#include "breeder/error.hpp"
#include "support.hpp"

namespace breeder {
namespace {

using testing::add_hidden;
using testing::bare_gray;
using testing::link;

// x -> h (100) -> out with h -> out weight 0; y -> out carries the image.
Genome dead_branch() {
  Genome g = bare_gray(Activation::Sine);
  add_hidden(g, 50, Activation::Gaussian);
  link(g, 100, node_ids::kX, 50, 0.5);
  link(g, 101, 50, node_ids::kIntensity, 0.0);
  link(g, 102, node_ids::kY, node_ids::kIntensity, 1.3);
  return g;
}

TEST(SweepGrid, DefaultAndFineCounts) {
  EXPECT_EQ(sweep_grid(-3, 3, 0.1).size(), 61u);
  EXPECT_EQ(sweep_grid(-3, 3, 0.01).size(), 601u);
  const auto g = sweep_grid(-3, 3, 0.1);
  EXPECT_EQ(g.front(), -3.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_EQ(g[30], 0.0);
}

TEST(SweepGrid, ClosesAtHiWhenStepDoesNotDivide) {
  const auto g = sweep_grid(0.0, 1.0, 0.3);
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.3, 0.6, 0.9, 1.0}));
  for (double step : {0.07, 0.25, 0.4, 0.13}) {
    const auto grid = sweep_grid(-3, 3, step);
    const auto base = static_cast<std::size_t>(std::floor(6.0 / step + 1e-9)) + 1;
    const bool exact = std::abs(std::round(6.0 / step) * step - 6.0) < 1e-9;
    EXPECT_EQ(grid.size(), base + (exact ? 0 : 1)) << step;
    EXPECT_EQ(grid.back(), 3.0);
    EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  }
}

TEST(SweepGrid, CoarseGridInsideFineGrid) {
  const auto coarse = sweep_grid(-3, 3, 0.1);
  const auto fine = sweep_grid(-3, 3, 0.01);
  const std::set<double> fine_set(fine.begin(), fine.end());
  for (double w : coarse) EXPECT_TRUE(fine_set.contains(w)) << w;
}

TEST(SweepGrid, RejectsBadRange) {
  EXPECT_THROW(sweep_grid(1, 1, 0.1), Error);
  EXPECT_THROW(sweep_grid(-1, 1, 0.0), Error);
}

TEST(Sweep, DefaultProtocol) {
  InnovationRegistry registry;
  Rng rng(1);
  const Genome g = testing::grown(Palette::Gray, registry, rng, 6);
  const auto before = canonical(genome_to_json(g));
  SweepSpec spec;
  spec.connection = g.connections.back().enabled ? g.connections.back().innovation
                                                 : g.connections.front().innovation;
  spec.width = spec.height = 12;
  const SweepResult r = sweep(g, spec);
  EXPECT_EQ(r.frames.size(), 61u);
  EXPECT_EQ(r.baseline, render(g, 12, 12));
  EXPECT_EQ(canonical(genome_to_json(g)), before);
}

TEST(Sweep, FrameAtBaselineWeightEqualsRender) {
  Genome g = dead_branch();
  g.find_connection(102)->weight = 1.3;
  SweepSpec spec;
  spec.connection = 102;
  spec.width = spec.height = 9;
  const SweepResult r = sweep(g, spec);
  const auto it = std::find_if(r.frames.begin(), r.frames.end(), [](const auto& f) { return f.weight == 1.3; });
  ASSERT_NE(it, r.frames.end());
  EXPECT_EQ(it->image, render(g, 9, 9));
  EXPECT_GT(r.impact.changed_fraction, 0.0);
}

TEST(Sweep, ZeroInfluenceConnection) {
  SweepSpec spec;
  spec.connection = 100;
  spec.width = spec.height = 10;
  const SweepResult r = sweep(dead_branch(), spec);
  for (const auto& f : r.frames) EXPECT_EQ(f.image, r.frames.front().image);
  EXPECT_EQ(r.impact.changed_fraction, 0.0);
}

TEST(Sweep, Errors) {
  SweepSpec spec;
  spec.connection = 999;
  auto code_of = [&](const Genome& g) {
    try {
      sweep(g, spec);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code_of(dead_branch()), ErrorCode::UnknownConnection);
  Genome g = dead_branch();
  g.find_connection(101)->enabled = false;
  spec.connection = 101;
  EXPECT_EQ(code_of(g), ErrorCode::DisabledConnection);
}

SweepResult synthetic(int w, int h, std::vector<std::pair<double, ImageBuffer>> frames, double baseline_w) {
  SweepResult r;
  r.baseline_weight = baseline_w;
  r.baseline = ImageBuffer(w, h, 1);
  for (auto& [weight, img] : frames) r.frames.push_back({weight, std::move(img)});
  return r;
}

TEST(ImpactMap, IdenticalFramesGiveZero) {
  const auto r = synthetic(4, 3, {{0.0, ImageBuffer(4, 3, 1)}, {0.5, ImageBuffer(4, 3, 1)}}, 0.0);
  const ImpactMap m = impact_map(r);
  EXPECT_EQ(m.changed_fraction, 0.0);
  for (double v : m.full_range) EXPECT_EQ(v, 0.0);
}

TEST(ImpactMap, SinglePixelChange) {
  ImageBuffer changed(4, 3, 1);
  changed.at(2, 1) = 255;
  const auto r = synthetic(4, 3, {{0.0, ImageBuffer(4, 3, 1)}, {0.5, changed}}, 0.0);
  const ImpactMap m = impact_map(r);
  EXPECT_DOUBLE_EQ(m.changed_fraction, 1.0 / 12.0);
  EXPECT_EQ(m.local_window[1 * 4 + 2], 1.0);
}

TEST(ImpactMap, DistantFramesOnlyInFullRange) {
  ImageBuffer changed(2, 2, 1);
  changed.at(0, 0) = 200;
  const auto r = synthetic(2, 2, {{0.0, ImageBuffer(2, 2, 1)}, {2.5, changed}}, 0.0);
  const ImpactMap m = impact_map(r);
  EXPECT_DOUBLE_EQ(m.full_range[0], 200.0 / 255.0);
  EXPECT_EQ(m.local_window[0], 0.0);
  EXPECT_EQ(m.changed_fraction, 0.0);
}

TEST(ImpactMap, MatchesDirectRecomputationOnRandomSweeps) {
  InnovationRegistry registry;
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Genome g = testing::grown(trial % 3 ? Palette::Gray : Palette::Color, registry, rng, 4);
    std::vector<Innovation> enabled;
    for (const auto& c : g.connections) {
      if (c.enabled) enabled.push_back(c.innovation);
    }
    SweepSpec spec;
    spec.connection = enabled[rng() % enabled.size()];
    spec.step = 0.5;
    spec.width = spec.height = 6;
    const SweepResult r = sweep(g, spec);
    const std::size_t pixels = 36;
    const auto ch = static_cast<std::size_t>(r.baseline.channels);
    for (std::size_t p = 0; p < pixels; ++p) {
      double full = 0, local = 0;
      for (const auto& f : r.frames) {
        double d = 0;
        for (std::size_t c = 0; c < ch; ++c) {
          d = std::max(d, std::abs(double(f.image.data[p * ch + c]) - double(r.baseline.data[p * ch + c])) / 255.0);
        }
        full = std::max(full, d);
        if (std::abs(f.weight - r.baseline_weight) <= 1.0) local = std::max(local, d);
      }
      ASSERT_EQ(r.impact.full_range[p], full);
      ASSERT_EQ(r.impact.local_window[p], local);
      ASSERT_GE(r.impact.full_range[p], r.impact.local_window[p]);
    }
    double prev = 1.0;
    for (double t : {0.0, 0.01, 0.05, 0.2, 0.5, 0.99}) {
      const double f = impact_map(r, t).changed_fraction;
      ASSERT_LE(f, prev);
      prev = f;
    }
  }
}

TEST(ImpactMap, EmptyFramesRejected) {
  SweepResult r;
  EXPECT_THROW(impact_map(r), Error);
}

TEST(Labels, AssignReadOverwrite) {
  const Genome g = dead_branch();
  LabelStore s = assign_label({}, g, 100, "eye", {255, 0, 0});
  EXPECT_EQ(s.labels.at(100), (ConnectionLabel{"eye", {255, 0, 0}}));
  s = assign_label(s, g, 100, "mouth", {0, 0, 255});
  EXPECT_EQ(s.labels.at(100).name, "mouth");
  EXPECT_EQ(s.labels.size(), 1u);
  EXPECT_THROW(assign_label(s, g, 4242, "x", {}), Error);
}

TEST(Labels, SaveReloadIsByteEqual) {
  const Genome g = dead_branch();
  LabelStore s = assign_label({}, g, 100, "eye", {255, 0, 0});
  s = assign_label(s, g, 102, "shadow \"dark\"", {1, 2, 3});
  const auto dir = std::filesystem::temp_directory_path() / "breeder_labels_test";
  std::filesystem::create_directories(dir);
  save_labels(s, dir / "a.json");
  save_labels(load_labels(dir / "a.json"), dir / "b.json");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  std::filesystem::remove_all(dir);
}

TEST(Labels, Rename) {
  const Genome g = dead_branch();
  LabelStore s = assign_label({}, g, 100, "a", {});
  s = assign_label(s, g, 101, "b", {});
  s = rename_labels(s, "a", "b");
  EXPECT_EQ(s.labels.at(100).name, "b");
}

// Node 50 with four incoming connections 110..113.
Genome fan_in() {
  Genome g = bare_gray();
  add_hidden(g, 50, Activation::Sine);
  link(g, 110, node_ids::kX, 50, 1.0);
  link(g, 111, node_ids::kY, 50, 1.0);
  link(g, 112, node_ids::kD, 50, 1.0);
  link(g, 113, node_ids::kBias, 50, 1.0);
  link(g, 120, 50, node_ids::kIntensity, 1.0);
  return g;
}

TEST(NodeLabel, Majority) {
  const Genome g = fan_in();
  LabelStore s;
  s = assign_label(s, g, 110, "B", {});
  s = assign_label(s, g, 111, "A", {});
  s = assign_label(s, g, 112, "A", {});
  EXPECT_EQ(node_label(g, s, 50)->name, "A");
}

TEST(NodeLabel, TieGoesToLowestInnovation) {
  const Genome g = fan_in();
  LabelStore s;
  s = assign_label(s, g, 112, "A", {});
  s = assign_label(s, g, 111, "B", {});
  EXPECT_EQ(node_label(g, s, 50)->name, "B");
}

TEST(NodeLabel, UnlabeledCases) {
  Genome g = fan_in();
  EXPECT_FALSE(node_label(g, {}, 50).has_value());
  LabelStore s = assign_label({}, g, 110, "A", {});
  EXPECT_FALSE(node_label(g, s, node_ids::kX).has_value());
  g.find_connection(110)->enabled = false;  // disabled incoming genes do not vote
  EXPECT_FALSE(node_label(g, s, 50).has_value());
  EXPECT_THROW(node_label(g, s, 777), Error);
}

TEST(Annotate, UnlabeledGenomeIsNeutral) {
  const Genome g = fan_in();
  const auto out = annotate_export(g, {});
  EXPECT_NE(out.svg.find("<svg"), std::string::npos);
  const std::string neutral = "stroke=\"" + to_hex(kNeutralEdge) + "\"";
  std::size_t lines = 0, neutral_lines = 0;
  for (std::size_t at = out.svg.find("<line"); at != std::string::npos; at = out.svg.find("<line", at + 1)) {
    ++lines;
    const auto end = out.svg.find('>', at);
    neutral_lines += out.svg.substr(at, end - at).find(neutral) != std::string::npos;
  }
  EXPECT_EQ(lines, g.connections.size());
  EXPECT_EQ(neutral_lines, lines);
  EXPECT_TRUE(out.decomposition.at("groups").empty());
}

TEST(Annotate, DecompositionPartitionsLabeledConnections) {
  const Genome g = fan_in();
  LabelStore s;
  s = assign_label(s, g, 110, "eye", {10, 20, 30});
  s = assign_label(s, g, 111, "eye", {10, 20, 30});
  s = assign_label(s, g, 113, "mouth", {200, 0, 0});
  s = assign_label(s, g, 120, "glow", {0, 200, 0});
  const auto out = annotate_export(g, s, {{50, 1}, {node_ids::kX, 0}});
  const auto& groups = out.decomposition.at("groups");
  EXPECT_EQ(groups.size(), 3u);
  std::multiset<Innovation> seen;
  for (const auto& grp : groups) {
    for (const auto& id : grp.at("connections")) seen.insert(id.get<Innovation>());
  }
  EXPECT_EQ(seen, (std::multiset<Innovation>{110, 111, 113, 120}));
  EXPECT_NE(out.svg.find("#0a141e"), std::string::npos);
  EXPECT_NE(out.svg.find("data-module=\"1\""), std::string::npos);
}

TEST(Annotate, LayersPutInputsBelowOutputs) {
  const auto depth = layer_depths(fan_in());
  EXPECT_EQ(depth.at(node_ids::kX), 0);
  EXPECT_EQ(depth.at(50), 1);
  EXPECT_EQ(depth.at(node_ids::kIntensity), 2);
}

}  // namespace
}  // namespace breeder
