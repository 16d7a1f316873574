#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "breeder/neat/mutation.hpp"

namespace breeder {

constexpr int kDefaultPopulation = 15;
constexpr int kMinPopulation = 4;
constexpr int kMaxPopulation = 64;

struct Session {
  std::string id;
  Palette palette = Palette::Gray;
  std::vector<Genome> population;
  // Published image the session was branched from; empty for scratch sessions.
  std::optional<std::string> origin;
  std::uint64_t generation = 0;
  std::shared_ptr<InnovationRegistry> registry;
  std::uint64_t rng_seed = 0;
};

// Population of `size` independent seed genomes.
Session start_scratch(std::string id, Palette palette, int size, std::shared_ptr<InnovationRegistry> registry,
                      std::uint64_t seed, Rng& rng);

// Offspring of a published genome: slot 0 holds the parent unchanged, the other
// n - 1 slots are mutate(clone(parent)).
std::vector<Genome> branch(const Genome& published, InnovationRegistry& registry, const MutationConfig& cfg,
                           Rng& rng, int n);

Session start_branch(std::string id, std::string origin_image, const Genome& published, int size,
                     std::shared_ptr<InnovationRegistry> registry, const MutationConfig& cfg,
                     std::uint64_t seed, Rng& rng);

// Selected genomes carry over unchanged (in ascending slot order); the
// remaining slots hold offspring: mutate(crossover(p, q)) for two distinct
// selected parents, or mutate(clone(p)) when only one genome is selected.
Session next_generation(const Session& session, const std::vector<int>& selected, const MutationConfig& cfg,
                        Rng& rng);

}  // namespace breeder
