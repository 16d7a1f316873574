#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "breeder/cppn/genome.hpp"
#include "breeder/cppn/genome_json.hpp"

namespace breeder {

// Assigns historical markings. The same structural event (connecting the same
// ordered node pair, splitting the same connection) always maps to the same
// id; fresh ids come from a single strictly increasing counter. All methods
// are serialized, so one registry can be shared across sessions.
class InnovationRegistry {
 public:
  InnovationRegistry() = default;
  InnovationRegistry(const InnovationRegistry& other);
  InnovationRegistry& operator=(const InnovationRegistry& other);

  Innovation connection(Innovation source, Innovation target);

  // Node id for splitting connection `split`. Ids previously issued for this
  // split are reused unless `taken` reports them present in the genome being
  // mutated (the same gene can be split again in a crossover child that also
  // inherited the first split's node); then a new id is issued and recorded.
  Innovation split_node(Innovation split, const std::function<bool(Innovation)>& taken);

  // Folds a genome's markings into the registry so later events never collide
  // with ids it already uses.
  void observe(const Genome& genome);

  Innovation next_id() const;

  Json to_json() const;
  static InnovationRegistry from_json(const Json& doc);

 private:
  mutable std::mutex mutex_;
  Innovation next_ = node_ids::kFirstFree;
  std::map<std::pair<Innovation, Innovation>, Innovation> connections_;
  std::map<Innovation, std::vector<Innovation>> splits_;
};

}  // namespace breeder
