#include "breeder/neat/session.hpp"

#include <algorithm>
#include <set>

#include "breeder/error.hpp"

namespace breeder {

namespace {

std::string slot_id(const std::string& session, std::uint64_t generation, std::size_t slot) {
  return session + "/g" + std::to_string(generation) + "/s" + std::to_string(slot);
}

void check_size(int size) {
  if (size < kMinPopulation || size > kMaxPopulation) {
    throw Error(ErrorCode::IndexOutOfRange, "population size " + std::to_string(size) + " outside [" +
                                                std::to_string(kMinPopulation) + ", " +
                                                std::to_string(kMaxPopulation) + "]");
  }
}

}  // namespace

Session start_scratch(std::string id, Palette palette, int size, std::shared_ptr<InnovationRegistry> registry,
                      std::uint64_t seed, Rng& rng) {
  check_size(size);
  Session s{std::move(id), palette, {}, std::nullopt, 0, std::move(registry), seed};
  for (int i = 0; i < size; ++i) {
    s.population.push_back(seed_genome(palette, *s.registry, rng));
    s.population.back().id = slot_id(s.id, 0, static_cast<std::size_t>(i));
  }
  return s;
}

std::vector<Genome> branch(const Genome& published, InnovationRegistry& registry, const MutationConfig& cfg,
                           Rng& rng, int n) {
  require_valid(published);
  std::vector<Genome> out;
  if (n <= 0) return out;
  out.push_back(published);
  for (int i = 1; i < n; ++i) out.push_back(mutate(published, cfg, registry, rng));
  return out;
}

Session start_branch(std::string id, std::string origin_image, const Genome& published, int size,
                     std::shared_ptr<InnovationRegistry> registry, const MutationConfig& cfg,
                     std::uint64_t seed, Rng& rng) {
  check_size(size);
  registry->observe(published);
  Session s{std::move(id), published.palette, {}, std::move(origin_image), 0, std::move(registry), seed};
  s.population = branch(published, *s.registry, cfg, rng, size);
  for (std::size_t i = 0; i < s.population.size(); ++i) s.population[i].id = slot_id(s.id, 0, i);
  return s;
}

Session next_generation(const Session& session, const std::vector<int>& selected, const MutationConfig& cfg,
                        Rng& rng) {
  if (selected.empty()) throw Error(ErrorCode::EmptySelection, "no genomes selected");
  const int size = static_cast<int>(session.population.size());
  std::set<int> chosen;
  for (int idx : selected) {
    if (idx < 0 || idx >= size) {
      throw Error(ErrorCode::IndexOutOfRange, "slot " + std::to_string(idx) + " outside population of " +
                                                  std::to_string(size));
    }
    chosen.insert(idx);
  }
  const std::vector<int> parents(chosen.begin(), chosen.end());

  Session next = session;
  next.generation = session.generation + 1;
  next.population.clear();
  for (int idx : parents) next.population.push_back(session.population[static_cast<std::size_t>(idx)]);

  InnovationRegistry& registry = *session.registry;
  const auto n_parents = parents.size();
  while (next.population.size() < session.population.size()) {
    Genome child;
    if (n_parents == 1) {
      child = session.population[static_cast<std::size_t>(parents[0])];
    } else {
      const auto i = std::uniform_int_distribution<std::size_t>(0, n_parents - 1)(rng);
      auto j = std::uniform_int_distribution<std::size_t>(0, n_parents - 2)(rng);
      if (j >= i) ++j;
      child = crossover(session.population[static_cast<std::size_t>(parents[i])],
                        session.population[static_cast<std::size_t>(parents[j])], rng);
    }
    child = mutate(child, cfg, registry, rng);
    child.id = slot_id(session.id, next.generation, next.population.size());
    next.population.push_back(std::move(child));
  }
  return next;
}

}  // namespace breeder
