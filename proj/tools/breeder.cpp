// Command-line front end: render, evolve, sweep, metrics, corpus, serve.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "breeder/canalization/sweep.hpp"
#include "breeder/corpus/corpus.hpp"
#include "breeder/cppn/image.hpp"
#include "breeder/error.hpp"
#include "breeder/neat/session.hpp"
#include "breeder/studio/server.hpp"

namespace fs = std::filesystem;
using namespace breeder;

namespace {

void emit(const Json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

std::string padded(std::size_t i, std::size_t count) {
  std::ostringstream s;
  s << std::setw(static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size())) << std::setfill('0') << i;
  return s.str();
}

std::vector<int> parse_slots(const std::string& text) {
  std::vector<int> slots;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      slots.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad slot '" + item + "'");
    }
  }
  return slots;
}

MutationConfig load_config(const std::string& path) {
  return path.empty() ? MutationConfig{} : mutation_config_from_json(read_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive CPPN breeding, canalization probing and structure statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // render
  std::string r_genome, r_out;
  int r_width = 256, r_height = 256;
  std::optional<Innovation> r_node;
  auto* render_cmd = app.add_subcommand("render", "Render a genome to PNG");
  render_cmd->add_option("--genome", r_genome, "Genome JSON")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", r_out, "PNG path")->required();
  render_cmd->add_option("--width", r_width)->check(CLI::Range(1, 8192));
  render_cmd->add_option("--height", r_height)->check(CLI::Range(1, 8192));
  render_cmd->add_option("--node", r_node, "Render one node's activation instead of the outputs");

  // evolve
  std::string e_from, e_palette = "gray", e_select, e_out, e_config;
  std::uint64_t e_seed = 0;
  int e_generations = 10, e_size = kDefaultPopulation, e_image = 128;
  auto* evolve_cmd = app.add_subcommand("evolve", "Run a scripted breeding session");
  evolve_cmd->add_option("--seed", e_seed, "Random seed")->required();
  evolve_cmd->add_option("--from", e_from, "Genome JSON to branch from (default: scratch)")->check(CLI::ExistingFile);
  evolve_cmd->add_option("--palette", e_palette, "gray or color (scratch only)")->check(CLI::IsMember({"gray", "color"}));
  evolve_cmd->add_option("--generations", e_generations)->check(CLI::Range(0, 100000));
  evolve_cmd->add_option("--size", e_size, "Population size")->check(CLI::Range(kMinPopulation, kMaxPopulation));
  evolve_cmd->add_option("--select", e_select, "Comma-separated slots kept each generation (default: two random)");
  evolve_cmd->add_option("--config", e_config, "Mutation config JSON")->check(CLI::ExistingFile);
  evolve_cmd->add_option("--image-size", e_image, "PNG size; 0 skips images")->check(CLI::Range(0, 4096));
  evolve_cmd->add_option("--out", e_out, "Output directory")->required();

  // sweep
  std::string s_genome, s_out;
  Innovation s_connection = 0;
  double s_lo = kWeightMin, s_hi = kWeightMax, s_step = kCoarseStep, s_threshold = kDefaultImpactThreshold;
  bool s_fine = false;
  int s_size = 64;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one connection weight and render every frame");
  sweep_cmd->add_option("--genome", s_genome)->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--connection", s_connection, "Connection innovation")->required();
  sweep_cmd->add_option("--lo", s_lo);
  sweep_cmd->add_option("--hi", s_hi);
  sweep_cmd->add_option("--step", s_step);
  sweep_cmd->add_flag("--fine", s_fine, "Use step 0.01");
  sweep_cmd->add_option("--size", s_size)->check(CLI::Range(1, 4096));
  sweep_cmd->add_option("--threshold", s_threshold, "Impact threshold");
  sweep_cmd->add_option("--out", s_out, "Output directory")->required();

  // metrics
  std::string m_genome, m_parent, m_out;
  int m_nulls = kDefaultNullModels;
  std::uint64_t m_seed = 0;
  bool m_count_disabled = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "Residual modularity and hierarchy of one genome");
  metrics_cmd->add_option("--genome", m_genome)->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--parent", m_parent, "Parent genome (default: minimal seed)")->check(CLI::ExistingFile);
  metrics_cmd->add_option("--nulls", m_nulls)->check(CLI::Range(1, 100000));
  metrics_cmd->add_option("--seed", m_seed);
  metrics_cmd->add_flag("--count-disabled", m_count_disabled, "Match total instead of enabled connection counts");
  metrics_cmd->add_option("--out", m_out, "JSON path (default: stdout)");

  // corpus
  std::string c_dir, c_store, c_report, c_csv;
  int c_nulls = kDefaultNullModels, c_resamples = kBootstrapResamples;
  std::size_t c_bins = kDefaultBins;
  std::uint64_t c_seed = 0;
  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus statistics over published genomes");
  auto* dir_opt = corpus_cmd->add_option("--dir", c_dir, "Directory of genome JSON files")->check(CLI::ExistingDirectory);
  auto* store_opt = corpus_cmd->add_option("--store", c_store, "Studio store directory")->check(CLI::ExistingDirectory);
  dir_opt->excludes(store_opt);
  corpus_cmd->add_option("--nulls", c_nulls)->check(CLI::Range(1, 100000));
  corpus_cmd->add_option("--seed", c_seed);
  corpus_cmd->add_option("--resamples", c_resamples)->check(CLI::Range(1, 1000000));
  corpus_cmd->add_option("--bins", c_bins)->check(CLI::Range(1, 1000));
  corpus_cmd->add_option("--report", c_report, "Report JSON path (default: stdout)");
  corpus_cmd->add_option("--csv", c_csv, "Bin table CSV path");

  // serve
  ServeConfig serve_cfg;
  std::string v_static, v_config;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--store", serve_cfg.store_dir, "Store directory");
  serve_cmd->add_option("--host", serve_cfg.host);
  serve_cmd->add_option("--port", serve_cfg.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--static", v_static, "Directory of UI assets served at /")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--config", v_config, "Mutation config JSON")->check(CLI::ExistingFile);
  serve_cmd->add_option("--nulls", serve_cfg.options.default_nulls)->check(CLI::Range(1, 1000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*render_cmd) {
      const Genome g = load_genome_file(r_genome).genome;
      write_png(r_node ? render_node(g, *r_node, r_width, r_height) : render(g, r_width, r_height), r_out);
    } else if (*evolve_cmd) {
      const MutationConfig cfg = load_config(e_config);
      auto registry = std::make_shared<InnovationRegistry>();
      Rng rng(e_seed);
      Session session;
      if (e_from.empty()) {
        session = start_scratch("evolve", palette_from_string(e_palette), e_size, registry, e_seed, rng);
      } else {
        const GenomeDocument origin = load_genome_file(e_from);
        session = start_branch("evolve", origin.genome.id, origin.genome, e_size, registry, cfg, e_seed, rng);
      }
      const std::vector<int> fixed = parse_slots(e_select);
      for (int gen = 0; gen < e_generations; ++gen) {
        std::vector<int> chosen = fixed;
        if (chosen.empty()) {
          std::uniform_int_distribution<int> pick(0, e_size - 1);
          chosen = {pick(rng), pick(rng)};
        }
        session = next_generation(session, chosen, cfg, rng);
      }
      const fs::path population = fs::path(e_out) / "population";
      fs::create_directories(population);
      Json slots = Json::array();
      for (std::size_t k = 0; k < session.population.size(); ++k) {
        const std::string stem = "slot_" + padded(k, session.population.size());
        save_genome_file({session.population[k], session.origin, "", ""}, population / (stem + ".json"));
        if (e_image > 0) write_png(render(session.population[k], e_image, e_image), population / (stem + ".png"));
        slots.push_back(stem);
      }
      write_text_file(fs::path(e_out) / "registry.json", canonical(registry->to_json()) + "\n");
      emit({{"generation", session.generation},
            {"seed", e_seed},
            {"palette", std::string(to_string(session.palette))},
            {"config", to_json(cfg)},
            {"slots", slots}},
           (fs::path(e_out) / "session.json").string());
    } else if (*sweep_cmd) {
      const Genome g = load_genome_file(s_genome).genome;
      SweepSpec spec;
      spec.connection = s_connection;
      spec.lo = s_lo;
      spec.hi = s_hi;
      spec.step = s_fine ? kFineStep : s_step;
      spec.width = spec.height = s_size;
      SweepResult result = sweep(g, spec);
      result.impact = impact_map(result, s_threshold);
      fs::create_directories(s_out);
      for (std::size_t i = 0; i < result.frames.size(); ++i) {
        write_png(result.frames[i].image, fs::path(s_out) / ("frame_" + padded(i, result.frames.size()) + ".png"));
      }
      ImageBuffer full(result.impact.width, result.impact.height, 1), local = full;
      for (std::size_t i = 0; i < result.impact.full_range.size(); ++i) {
        full.data[i] = to_byte(result.impact.full_range[i]);
        local.data[i] = to_byte(result.impact.local_window[i]);
      }
      write_png(full, fs::path(s_out) / "impact_full.png");
      write_png(local, fs::path(s_out) / "impact_local.png");
      Json out = sweep_summary(result);
      out["full_range"] = result.impact.full_range;
      out["local_window"] = result.impact.local_window;
      emit(out, (fs::path(s_out) / "impact.json").string());
    } else if (*metrics_cmd) {
      const GenomeDocument doc = load_genome_file(m_genome);
      std::optional<Genome> parent;
      if (!m_parent.empty()) parent = load_genome_file(m_parent).genome;
      InnovationRegistry registry;
      registry.observe(doc.genome);
      if (parent) registry.observe(*parent);
      NullModelConfig cfg;
      cfg.count = m_nulls;
      cfg.count_disabled = m_count_disabled;
      const GenomeScores scores = score_genome(doc.genome, parent ? &*parent : nullptr, registry, m_seed, cfg);
      emit(to_json(scores), m_out);
    } else if (*corpus_cmd) {
      if (c_dir.empty() && c_store.empty()) throw Error(ErrorCode::ParseError, "one of --dir or --store is required");
      std::vector<GenomeDocument> docs;
      InnovationRegistry registry;
      if (!c_dir.empty()) {
        docs = load_corpus_dir(c_dir);
      } else {
        Store store(c_store);
        for (const auto& r : store.records()) docs.push_back(to_document(r));
        registry = *store.registry();
      }
      NullModelConfig cfg;
      cfg.count = c_nulls;
      const ScoredCorpus scored = score_corpus(docs, registry, c_seed, cfg);
      for (const auto& s : scored.skipped) std::fprintf(stderr, "skipped %s: %s\n", s.genome_id.c_str(), s.reason.c_str());
      Rng rng(c_seed);
      ReportConfig rc;
      rc.bins = c_bins;
      rc.resamples = c_resamples;
      const CorpusReport report = corpus_report(scored.records, rng, rc);
      Json out = to_json(report);
      Json records = Json::array();
      for (const auto& r : scored.records) records.push_back(to_json(r));
      out["records"] = records;
      Json skipped = Json::array();
      for (const auto& s : scored.skipped) skipped.push_back({{"genome_id", s.genome_id}, {"reason", s.reason}});
      out["skipped"] = skipped;
      emit(out, c_report);
      if (!c_csv.empty()) write_text_file(c_csv, bins_csv(report));
    } else if (*serve_cmd) {
      if (!v_static.empty()) serve_cfg.options.static_dir = v_static;
      serve_cfg.mutation = load_config(v_config);
      serve(serve_cfg);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
