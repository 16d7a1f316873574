#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "breeder/corpus/corpus.hpp"
#include "breeder/error.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

namespace breeder {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

TEST(Wilcoxon, OneTwoThree) {
  const auto r = wilcoxon_signed_rank({1, 2, 3});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 0.25);
  EXPECT_EQ(*r.n_nonzero, 3u);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(oracle::wilcoxon_enumerated({1, 2, 3}), 0.25);
}

TEST(Wilcoxon, AntisymmetricSample) {
  const auto r = wilcoxon_signed_rank({-1.5, 1.5, -4.0, 4.0});
  EXPECT_EQ(r.statistic, 5.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Wilcoxon, ZerosDroppedAndCounted) {
  const auto r = wilcoxon_signed_rank({0, 1, 0, 2, 3});
  EXPECT_EQ(r.n, 5u);
  EXPECT_EQ(*r.n_nonzero, 3u);
  EXPECT_DOUBLE_EQ(r.p_value, 0.25);
  EXPECT_EQ(code_of([] { wilcoxon_signed_rank({0.0, 0.0}); }), ErrorCode::AllZeros);
}

TEST(Wilcoxon, ExactMatchesEnumeration) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> v(n);
      // Small integer support forces ties and zeros.
      const bool tied = trial % 2 == 0;
      for (auto& x : v) {
        x = tied ? static_cast<double>(static_cast<int>(rng() % 9) - 4)
                 : std::normal_distribution<double>(0.3, 1.0)(rng);
      }
      if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
      EXPECT_NEAR(wilcoxon_signed_rank(v, WilcoxonMethod::Exact).p_value, oracle::wilcoxon_enumerated(v), 1e-12);
    }
  }
}

TEST(Wilcoxon, ExactAndNormalAgreeAtSwitchover) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::normal_distribution<double> d(0.01 * (trial % 60), 1.0);
    std::vector<double> v(25);
    for (auto& x : v) x = d(rng);
    const double exact = wilcoxon_signed_rank(v, WilcoxonMethod::Exact).p_value;
    const double approx = wilcoxon_signed_rank(v, WilcoxonMethod::Normal).p_value;
    EXPECT_LE(std::abs(exact - approx), 0.01) << trial;
  }
}

TEST(Wilcoxon, AutoSwitchesAboveLimit) {
  std::vector<double> v(26);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
  EXPECT_FALSE(wilcoxon_signed_rank(v).exact);
  v.pop_back();
  EXPECT_TRUE(wilcoxon_signed_rank(v).exact);
}

TEST(Wilcoxon, UnderflowReportsSmallestPositive) {
  std::vector<double> v(5000, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += static_cast<double>(i);
  const auto r = wilcoxon_signed_rank(v);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 1e-300);
}

TEST(Pearson, AffineIsExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(3 + trial), up, down;
    for (auto& v : x) v = d(rng);
    for (double v : x) {
      up.push_back(2 * v + 1);
      down.push_back(-v);
    }
    EXPECT_NEAR(*pearson(x, up).r, 1.0, 1e-12);
    EXPECT_NEAR(*pearson(x, down).r, -1.0, 1e-12);
  }
}

TEST(Pearson, KnownValue) {
  // x = 1..5, y = (2, 1, 4, 3, 5): sxy = 8, sxx = syy = 10, r = 0.8.
  const auto r = pearson({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5});
  EXPECT_NEAR(*r.r, 0.8, 1e-15);
  const double t = 0.8 * std::sqrt(3.0 / 0.36);
  EXPECT_NEAR(r.statistic, t, 1e-12);
  // Closed-form t(3) tail: P(T > t) = 1/2 - (atan(u) + u / (1 + u^2)) / pi, u = t / sqrt(3).
  const double u = t / std::sqrt(3.0);
  const double cdf_upper = 0.5 - (std::atan(u) + u / (1 + u * u)) / M_PI;
  EXPECT_NEAR(r.p_value, 2 * cdf_upper, 1e-12);
}

TEST(Pearson, Degenerate) {
  EXPECT_EQ(code_of([] { pearson({1, 2}, {1, 2}); }), ErrorCode::DegenerateSample);
  EXPECT_EQ(code_of([] { pearson({1, 1, 1}, {1, 2, 3}); }), ErrorCode::DegenerateSample);
  EXPECT_EQ(code_of([] { pearson({1, 2, 3}, {1, 2}); }), ErrorCode::DegenerateSample);
}

TEST(Pearson, IndependentLargeSamples) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  int small = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(10000), y(10000);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const auto r = pearson(x, y);
    small += std::abs(*r.r) < 0.05;
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
  EXPECT_GE(small, 95);
}

TEST(Bootstrap, ConstantSample) {
  Rng rng(5);
  const auto ci = bootstrap_ci({2.5, 2.5, 2.5}, Statistic::Mean, rng);
  EXPECT_EQ(ci.lo, 2.5);
  EXPECT_EQ(ci.hi, 2.5);
  EXPECT_EQ(ci.resamples, 5000);
  EXPECT_EQ(ci.level, 0.95);
  EXPECT_EQ(code_of([&] { bootstrap_ci({1.0}, Statistic::Mean, rng); }), ErrorCode::TooSmall);
}

TEST(Bootstrap, ContainsSampleMean) {
  Rng rng(6);
  std::normal_distribution<double> d;
  int inside = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(2 + trial % 30);
    for (auto& x : v) x = d(rng);
    const auto ci = bootstrap_ci(v, Statistic::Mean, rng);
    EXPECT_LE(ci.lo, ci.hi);
    inside += ci.lo <= ci.estimate && ci.estimate <= ci.hi;
  }
  EXPECT_GE(inside, 990);
}

TEST(Bootstrap, CoverageOfNormalMean) {
  Rng rng(7);
  std::normal_distribution<double> d;
  int covered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(100);
    for (auto& x : v) x = d(rng);
    const auto ci = bootstrap_ci(v, Statistic::Mean, rng);
    covered += ci.lo <= 0.0 && 0.0 <= ci.hi;
  }
  EXPECT_GE(covered, 180);
  EXPECT_LE(covered, 198);
}

TEST(Bootstrap, WidthShrinksWithN) {
  Rng rng(8);
  std::normal_distribution<double> d;
  std::vector<double> widths;
  for (std::size_t n : {10u, 100u, 1000u}) {
    double total = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> v(n);
      for (auto& x : v) x = d(rng);
      const auto ci = bootstrap_ci(v, Statistic::Mean, rng, 1000);
      total += ci.hi - ci.lo;
    }
    widths.push_back(total / 10);
  }
  EXPECT_GT(widths[0], widths[1]);
  EXPECT_GT(widths[1], widths[2]);
}

TEST(Statistics, MedianAndQuantile) {
  EXPECT_EQ(compute(Statistic::Median, {3, 1, 2}), 2.0);
  EXPECT_EQ(compute(Statistic::Median, {4, 1, 3, 2}), 2.5);
  EXPECT_EQ(quantile_sorted({0, 10}, 0.25), 2.5);
  EXPECT_EQ(quantile_sorted({1, 2, 3, 4, 5}, 0.5), 3.0);
}

Corpus family() {
  // root has 3 children; a has one child; the rest are leaves.
  return {{"root", std::nullopt, 0, 0.1, 0.0}, {"a", "root", 0, 0.2, 0.0}, {"b", "root", 0, -0.1, 0.0},
          {"c", "root", 0, 0.0, 0.1},          {"d", "a", 0, 0.3, -0.1}};
}

TEST(Fitness, Counts) {
  const Corpus c = family();
  EXPECT_EQ(fitness(c, "root"), 3u);
  EXPECT_EQ(fitness(c, "a"), 1u);
  EXPECT_EQ(fitness(c, "d"), 0u);
  EXPECT_EQ(code_of([&] { fitness(c, "zzz"); }), ErrorCode::UnknownGenome);
}

TEST(Fitness, SumEqualsLinkedRecordsAndIgnoresOrder) {
  Corpus c = family();
  assign_fitness(c);
  std::size_t total = 0, linked = 0;
  for (const auto& r : c) {
    total += r.fitness;
    linked += r.parent_id.has_value();
    EXPECT_EQ(r.fitness, fitness(c, r.genome_id));
  }
  EXPECT_EQ(total, linked);
  Corpus shuffled = c;
  std::reverse(shuffled.begin(), shuffled.end());
  assign_fitness(shuffled);
  for (const auto& r : shuffled) EXPECT_EQ(r.fitness, fitness(c, r.genome_id));
}

TEST(Report, EmptyCorpus) {
  Rng rng(9);
  EXPECT_EQ(code_of([&] { corpus_report({}, rng); }), ErrorCode::EmptyCorpus);
}

TEST(Report, AllZeroResiduals) {
  Corpus c = family();
  for (auto& r : c) r.q_residual = r.h_residual = 0.0;
  assign_fitness(c);
  Rng rng(10);
  const auto report = corpus_report(c, rng);
  EXPECT_EQ(report.q_wilcoxon.error, ErrorCode::AllZeros);
  EXPECT_EQ(report.h_wilcoxon.error, ErrorCode::AllZeros);
  EXPECT_EQ(report.q_pearson.error, ErrorCode::DegenerateSample);
  EXPECT_EQ(report.h_pearson.error, ErrorCode::DegenerateSample);
  EXPECT_EQ(report.q_median.value->lo, 0.0);
  const Json j = to_json(report);
  EXPECT_EQ(j["modularity"]["wilcoxon"]["error"], "AllZeros");
}

TEST(Report, BinsPartitionTheCorpus) {
  Corpus c = family();
  assign_fitness(c);
  Rng rng(11);
  const auto report = corpus_report(c, rng);
  ASSERT_EQ(report.q_bins.bins.size(), 20u);
  std::size_t total = 0;
  for (const auto& b : report.q_bins.bins) total += b.count;
  EXPECT_EQ(total, c.size());
  EXPECT_EQ(report.q_bins.bins.front().lo, -0.1);
  EXPECT_EQ(report.q_bins.bins.back().hi, 0.3);
  const std::string csv = bins_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
  ASSERT_TRUE(report.q_bins.fit.has_value());
}

TEST(Report, PlantedCorrelationDetected) {
  const Corpus c = scenario::planted_corpus(12, 200);
  Rng rng(12);
  const auto report = corpus_report(c, rng, {20, 1000, 0.95});
  ASSERT_TRUE(report.q_pearson.value.has_value());
  EXPECT_GT(*report.q_pearson.value->r, 0.5);
  EXPECT_LT(report.q_pearson.value->p_value, 0.01);
}

TEST(Report, NullProcessCorpusIsNotSignificant) {
  int quiet = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const Corpus c = scenario::null_process_corpus(rep, 200);
    std::vector<double> q;
    for (const auto& r : c) q.push_back(r.q_residual);
    quiet += wilcoxon_signed_rank(q).p_value > 0.05;
  }
  EXPECT_GE(quiet, 16);
}

TEST(ScoreCorpus, DeterministicAndOrderFree) {
  InnovationRegistry registry;
  Rng rng(13);
  std::vector<GenomeDocument> docs;
  Genome root = testing::grown(Palette::Gray, registry, rng, 3);
  root.id = "r";
  docs.push_back({root, std::nullopt, "root", "t"});
  for (int i = 0; i < 4; ++i) {
    Genome child = mutate_add_node(root, registry, rng).genome;
    child = mutate_add_connection(child, registry, rng).genome;
    child.id = "c" + std::to_string(i);
    docs.push_back({child, std::string("r"), "child", "t"});
  }
  const InnovationRegistry snapshot = registry;
  const auto a = score_corpus(docs, snapshot, 42);
  auto reversed = docs;
  std::reverse(reversed.begin(), reversed.end());
  const auto b = score_corpus(reversed, snapshot, 42);
  ASSERT_EQ(a.records.size(), 5u);
  ASSERT_EQ(b.records.size(), 5u);
  for (const auto& ra : a.records) {
    const auto rb = std::find_if(b.records.begin(), b.records.end(),
                                 [&](const CorpusRecord& r) { return r.genome_id == ra.genome_id; });
    EXPECT_EQ(canonical(to_json(ra)), canonical(to_json(*rb)));
  }
  EXPECT_EQ(fitness(a.records, "r"), 4u);

  Rng r1(1), r2(1);
  EXPECT_EQ(canonical(to_json(corpus_report(a.records, r1))), canonical(to_json(corpus_report(a.records, r2))));
}

TEST(ScoreCorpus, SkipsInfeasibleGenomes) {
  InnovationRegistry registry;
  Rng rng(14);
  Genome g = seed_genome(Palette::Gray, registry, rng);
  for (auto& c : g.connections) c.enabled = false;
  g.id = "dead";
  const auto scored = score_corpus({{g, std::nullopt, "", ""}}, registry, 1);
  EXPECT_TRUE(scored.records.empty());
  ASSERT_EQ(scored.skipped.size(), 1u);
  EXPECT_EQ(scored.skipped[0].genome_id, "dead");
}

TEST(LoadCorpus, ReadsDirectorySortedById) {
  const auto dir = std::filesystem::temp_directory_path() / "breeder_corpus_load";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  InnovationRegistry registry;
  Rng rng(15);
  for (const char* id : {"b", "a", "c"}) {
    Genome g = seed_genome(Palette::Gray, registry, rng);
    g.id = id;
    save_genome_file({g, std::nullopt, "", ""}, dir / (std::string(id) + ".json"));
  }
  write_text_file(dir / "notes.txt", "ignored");
  const auto docs = load_corpus_dir(dir);
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].genome.id, "a");
  EXPECT_EQ(docs[2].genome.id, "c");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace breeder
