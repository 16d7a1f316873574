#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "breeder/corpus/stats.hpp"
#include "breeder/error.hpp"
#include "breeder/cppn/genome.hpp"
#include "breeder/metrics/null_models.hpp"
#include "breeder/neat/registry.hpp"

namespace breeder {

struct CorpusRecord {
  std::string genome_id;
  std::optional<std::string> parent_id;
  std::size_t fitness = 0;  // number of records whose parent_id is genome_id
  double q_residual = 0.0;
  double h_residual = 0.0;
};

using Corpus = std::vector<CorpusRecord>;

// Direct-descendant count. Throws Error(UnknownGenome).
std::size_t fitness(const Corpus& corpus, const std::string& genome_id);

// Sets every record's fitness from the parent links.
void assign_fitness(Corpus& corpus);

// Published genomes, sorted by id. Every *.json file in the directory.
std::vector<GenomeDocument> load_corpus_dir(const std::filesystem::path& dir);

struct SkippedGenome {
  std::string genome_id;
  std::string reason;
};

struct ScoredCorpus {
  Corpus records;
  std::vector<SkippedGenome> skipped;
};

// Residual modularity and hierarchy for every genome, measured against null
// models grown from its parent record (or from the minimal seed of its palette
// when the parent is absent). Each genome draws from its own stream derived
// from `seed` and its id and grows its models in a private copy of the
// registry (after observing every genome), so scores do not depend on corpus
// order. Genomes whose null models cannot be built are listed in `skipped`.
ScoredCorpus score_corpus(const std::vector<GenomeDocument>& docs, const InnovationRegistry& registry, std::uint64_t seed,
                          const NullModelConfig& config = {});

struct GenomeScores {
  ResidualScore modularity;
  ResidualScore hierarchy;
  Partition partition;  // optimal split of the genome's own graph
  std::vector<Innovation> node_ids;  // partition index -> node innovation
};

// Residuals of one genome against null models grown from `parent`, or from the
// minimal seed of the genome's palette when there is none. Models are grown in
// a copy of `registry` with a stream derived from `seed` and the genome id.
GenomeScores score_genome(const Genome& genome, const Genome* parent, const InnovationRegistry& registry,
                          std::uint64_t seed, const NullModelConfig& config = {});

Json to_json(const GenomeScores& scores);

// Stream seed for one genome.
std::uint64_t genome_stream_seed(std::uint64_t seed, const std::string& genome_id);

constexpr std::size_t kDefaultBins = 20;

struct ReportConfig {
  std::size_t bins = kDefaultBins;
  int resamples = kBootstrapResamples;
  double level = kBootstrapLevel;
};

struct FitnessBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::optional<double> mean_fitness;
  std::optional<BootstrapCI> ci;  // needs two or more members
};

// Equal-width bins of a residual sample with the fitness of their members.
struct BinnedFitness {
  std::vector<FitnessBin> bins;
  std::optional<LineFit> fit;  // fitness regressed on residual
};

// Either a value or the error that prevented computing it.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::optional<ErrorCode> error;
  std::string message;
};

struct CorpusReport {
  std::size_t n = 0;
  Outcome<BootstrapCI> q_median;
  Outcome<BootstrapCI> h_median;
  Outcome<TestReport> q_wilcoxon;
  Outcome<TestReport> h_wilcoxon;
  Outcome<TestReport> q_pearson;  // (q_residual, fitness)
  Outcome<TestReport> h_pearson;  // (h_residual, fitness)
  BinnedFitness q_bins;
  BinnedFitness h_bins;
};

BinnedFitness bin_fitness(const std::vector<double>& residuals, const std::vector<double>& fitness, std::size_t bins,
                          Rng& rng, int resamples, double level);

// Throws Error(EmptyCorpus). Degenerate tests are reported in their Outcome.
CorpusReport corpus_report(const Corpus& corpus, Rng& rng, const ReportConfig& config = {});

Json to_json(const CorpusRecord& record);
Json to_json(const CorpusReport& report);

// One row per bin of both residual tables:
// metric,bin,lo,hi,count,mean_fitness,ci_lo,ci_hi
std::string bins_csv(const CorpusReport& report);

}  // namespace breeder
