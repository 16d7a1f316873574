#include "breeder/studio/lineage.hpp"

#include <algorithm>
#include <set>

#include "breeder/error.hpp"

namespace breeder {

std::string_view to_string(Presence p) {
  switch (p) {
    case Presence::Absent: return "absent";
    case Presence::Enabled: return "enabled";
    case Presence::Disabled: return "disabled";
  }
  return "absent";
}

LineageChain lineage(const Store& store, const std::string& image_id) {
  LineageChain chain;
  std::set<std::string> seen;
  std::optional<std::string> next = image_id;
  while (next) {
    if (!seen.insert(*next).second) throw Error(ErrorCode::StoreCorrupt, "parent cycle through '" + *next + "'");
    PublishRecord r = store.get(*next);
    next = r.parent_id;
    chain.records.push_back(std::move(r));
  }
  std::reverse(chain.records.begin(), chain.records.end());

  const Genome& target = chain.records.back().genome;
  for (const auto& c : target.connections) {
    auto& states = chain.tracked_connections[c.innovation];
    for (const auto& r : chain.records) {
      const ConnectionGene* g = r.genome.find_connection(c.innovation);
      states.push_back(!g ? Presence::Absent : g->enabled ? Presence::Enabled : Presence::Disabled);
    }
  }
  return chain;
}

Json to_json(const LineageChain& chain) {
  Json records = Json::array();
  for (const auto& r : chain.records) records.push_back(to_json(r));
  Json tracked = Json::object();
  const Genome& target = chain.records.back().genome;
  for (const auto& [innovation, states] : chain.tracked_connections) {
    const ConnectionGene* c = target.find_connection(innovation);
    Json presence = Json::array();
    for (Presence p : states) presence.push_back(std::string(to_string(p)));
    tracked[std::to_string(innovation)] = {{"source", c->source}, {"target", c->target}, {"presence", presence}};
  }
  return Json{{"records", records}, {"tracked_connections", tracked}};
}

}  // namespace breeder
