#include "breeder/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "breeder/error.hpp"

namespace breeder {

std::size_t fitness(const Corpus& corpus, const std::string& genome_id) {
  bool known = false;
  std::size_t children = 0;
  for (const auto& r : corpus) {
    known = known || r.genome_id == genome_id;
    children += r.parent_id && *r.parent_id == genome_id;
  }
  if (!known) throw Error(ErrorCode::UnknownGenome, "no genome '" + genome_id + "' in corpus");
  return children;
}

void assign_fitness(Corpus& corpus) {
  std::map<std::string, std::size_t> children;
  for (const auto& r : corpus) {
    if (r.parent_id) ++children[*r.parent_id];
  }
  for (auto& r : corpus) {
    const auto it = children.find(r.genome_id);
    r.fitness = it == children.end() ? 0 : it->second;
  }
}

std::vector<GenomeDocument> load_corpus_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::ParseError, dir.string() + " is not a directory");
  std::vector<GenomeDocument> docs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") docs.push_back(load_genome_file(entry.path()));
  }
  std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.genome.id < b.genome.id; });
  return docs;
}

std::uint64_t genome_stream_seed(std::uint64_t seed, const std::string& genome_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : genome_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer over the combination
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GenomeScores score_genome(const Genome& genome, const Genome* parent, const InnovationRegistry& registry,
                          std::uint64_t seed, const NullModelConfig& config) {
  InnovationRegistry local = registry;
  local.observe(genome);
  Rng rng(genome_stream_seed(seed, genome.id));
  const Genome base = parent ? *parent : seed_genome(genome.palette, local, rng);
  const NullModelBatch batch = null_models(genome, base, local, rng, config);
  GenomeScores scores;
  scores.modularity = residual(Metric::Modularity, genome, batch);
  scores.hierarchy = residual(Metric::Hierarchy, genome, batch);
  const GenomeGraph gg = genome_to_graph(genome);
  scores.partition = optimal_partition(gg.graph).partition;
  scores.node_ids = gg.node_ids;
  return scores;
}

Json to_json(const GenomeScores& scores) {
  Json partition = Json::array();
  for (std::size_t i = 0; i < scores.node_ids.size(); ++i) {
    partition.push_back({{"node", scores.node_ids[i]}, {"module", scores.partition.assignment[i]}});
  }
  return Json{{"q_raw", scores.modularity.raw},
              {"q_null_mean", scores.modularity.null_mean},
              {"q_residual", scores.modularity.residual},
              {"h_raw", scores.hierarchy.raw},
              {"h_null_mean", scores.hierarchy.null_mean},
              {"h_residual", scores.hierarchy.residual},
              {"partition", partition}};
}

ScoredCorpus score_corpus(const std::vector<GenomeDocument>& docs, const InnovationRegistry& registry,
                          std::uint64_t seed, const NullModelConfig& config) {
  InnovationRegistry base = registry;
  std::map<std::string, const GenomeDocument*> by_id;
  for (const auto& d : docs) {
    base.observe(d.genome);
    by_id[d.genome.id] = &d;
  }

  // Fitness counts every published child, scored or not.
  Corpus all;
  for (const auto& d : docs) all.push_back({d.genome.id, d.parent_id, 0, 0.0, 0.0});
  assign_fitness(all);

  ScoredCorpus out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const GenomeDocument& d = docs[i];
    const auto it = d.parent_id ? by_id.find(*d.parent_id) : by_id.end();
    const Genome* parent = it != by_id.end() ? &it->second->genome : nullptr;
    try {
      const GenomeScores scores = score_genome(d.genome, parent, base, seed, config);
      CorpusRecord record = all[i];
      record.q_residual = scores.modularity.residual;
      record.h_residual = scores.hierarchy.residual;
      out.records.push_back(std::move(record));
    } catch (const Error& e) {
      out.skipped.push_back({d.genome.id, e.what()});
    }
  }
  return out;
}

namespace {

template <typename T, typename F>
Outcome<T> attempt(F&& f) {
  Outcome<T> out;
  try {
    out.value = f();
  } catch (const Error& e) {
    out.error = e.code();
    out.message = e.what();
  }
  return out;
}

template <typename T>
Json outcome_json(const Outcome<T>& o) {
  if (o.value) return to_json(*o.value);
  return Json{{"error", std::string(to_string(*o.error))}, {"message", o.message}};
}

Json bins_json(const BinnedFitness& b) {
  Json bins = Json::array();
  for (const auto& bin : b.bins) {
    bins.push_back({{"lo", bin.lo},
                    {"hi", bin.hi},
                    {"count", bin.count},
                    {"mean_fitness", bin.mean_fitness ? Json(*bin.mean_fitness) : Json(nullptr)},
                    {"ci", bin.ci ? to_json(*bin.ci) : Json(nullptr)}});
  }
  Json fit = b.fit ? Json{{"slope", b.fit->slope}, {"intercept", b.fit->intercept}} : Json(nullptr);
  return Json{{"bins", bins}, {"fit", fit}};
}

}  // namespace

BinnedFitness bin_fitness(const std::vector<double>& residuals, const std::vector<double>& fitness, std::size_t bins,
                          Rng& rng, int resamples, double level) {
  if (bins == 0) throw Error(ErrorCode::TooSmall, "bin count must be positive");
  BinnedFitness out;
  out.fit = fit_line(residuals, fitness);
  if (residuals.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(residuals.begin(), residuals.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::vector<double>> members(bins);
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    std::size_t k = width > 0 ? static_cast<std::size_t>((residuals[i] - lo) / width) : 0;
    members[std::min(k, bins - 1)].push_back(fitness[i]);
  }
  for (std::size_t k = 0; k < bins; ++k) {
    FitnessBin bin;
    bin.lo = lo + width * static_cast<double>(k);
    bin.hi = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
    bin.count = members[k].size();
    if (!members[k].empty()) bin.mean_fitness = compute(Statistic::Mean, members[k]);
    if (members[k].size() >= 2) bin.ci = bootstrap_ci(members[k], Statistic::Mean, rng, resamples, level);
    out.bins.push_back(std::move(bin));
  }
  return out;
}

CorpusReport corpus_report(const Corpus& corpus, Rng& rng, const ReportConfig& config) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no scored genomes");
  std::vector<double> q, h, f;
  for (const auto& r : corpus) {
    q.push_back(r.q_residual);
    h.push_back(r.h_residual);
    f.push_back(static_cast<double>(r.fitness));
  }
  CorpusReport report;
  report.n = corpus.size();
  report.q_median = attempt<BootstrapCI>(
      [&] { return bootstrap_ci(q, Statistic::Median, rng, config.resamples, config.level); });
  report.h_median = attempt<BootstrapCI>(
      [&] { return bootstrap_ci(h, Statistic::Median, rng, config.resamples, config.level); });
  report.q_wilcoxon = attempt<TestReport>([&] { return wilcoxon_signed_rank(q); });
  report.h_wilcoxon = attempt<TestReport>([&] { return wilcoxon_signed_rank(h); });
  report.q_pearson = attempt<TestReport>([&] { return pearson(q, f); });
  report.h_pearson = attempt<TestReport>([&] { return pearson(h, f); });
  report.q_bins = bin_fitness(q, f, config.bins, rng, config.resamples, config.level);
  report.h_bins = bin_fitness(h, f, config.bins, rng, config.resamples, config.level);
  return report;
}

Json to_json(const CorpusRecord& record) {
  return Json{{"genome_id", record.genome_id},
              {"parent_id", record.parent_id ? Json(*record.parent_id) : Json(nullptr)},
              {"fitness", record.fitness},
              {"q_residual", record.q_residual},
              {"h_residual", record.h_residual}};
}

Json to_json(const CorpusReport& report) {
  return Json{{"n", report.n},
              {"modularity",
               {{"median", outcome_json(report.q_median)},
                {"wilcoxon", outcome_json(report.q_wilcoxon)},
                {"pearson_fitness", outcome_json(report.q_pearson)},
                {"bins", bins_json(report.q_bins)}}},
              {"hierarchy",
               {{"median", outcome_json(report.h_median)},
                {"wilcoxon", outcome_json(report.h_wilcoxon)},
                {"pearson_fitness", outcome_json(report.h_pearson)},
                {"bins", bins_json(report.h_bins)}}}};
}

std::string bins_csv(const CorpusReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "metric,bin,lo,hi,count,mean_fitness,ci_lo,ci_hi\n";
  auto table = [&](const char* metric, const BinnedFitness& b) {
    for (std::size_t k = 0; k < b.bins.size(); ++k) {
      const auto& bin = b.bins[k];
      out << metric << ',' << k << ',' << bin.lo << ',' << bin.hi << ',' << bin.count << ',';
      if (bin.mean_fitness) out << *bin.mean_fitness;
      out << ',';
      if (bin.ci) out << bin.ci->lo;
      out << ',';
      if (bin.ci) out << bin.ci->hi;
      out << '\n';
    }
  };
  table("modularity", report.q_bins);
  table("hierarchy", report.h_bins);
  return out.str();
}

}  // namespace breeder
