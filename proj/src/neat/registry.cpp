#include "breeder/neat/registry.hpp"

#include <algorithm>

#include "breeder/error.hpp"

namespace breeder {

InnovationRegistry::InnovationRegistry(const InnovationRegistry& other) {
  std::lock_guard lock(other.mutex_);
  next_ = other.next_;
  connections_ = other.connections_;
  splits_ = other.splits_;
}

InnovationRegistry& InnovationRegistry::operator=(const InnovationRegistry& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  next_ = other.next_;
  connections_ = other.connections_;
  splits_ = other.splits_;
  return *this;
}

Innovation InnovationRegistry::connection(Innovation source, Innovation target) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = connections_.try_emplace({source, target}, next_);
  if (inserted) ++next_;
  return it->second;
}

Innovation InnovationRegistry::split_node(Innovation split,
                                          const std::function<bool(Innovation)>& taken) {
  std::lock_guard lock(mutex_);
  auto& issued = splits_[split];
  for (Innovation id : issued) {
    if (!taken(id)) return id;
  }
  issued.push_back(next_);
  return next_++;
}

void InnovationRegistry::observe(const Genome& genome) {
  std::lock_guard lock(mutex_);
  for (const auto& c : genome.connections) connections_.try_emplace({c.source, c.target}, c.innovation);
  next_ = std::max(next_, genome.max_innovation() + 1);
}

Innovation InnovationRegistry::next_id() const {
  std::lock_guard lock(mutex_);
  return next_;
}

Json InnovationRegistry::to_json() const {
  std::lock_guard lock(mutex_);
  Json conns = Json::array();
  for (const auto& [pair, id] : connections_) conns.push_back({pair.first, pair.second, id});
  Json splits = Json::array();
  for (const auto& [conn, ids] : splits_) splits.push_back({{"connection", conn}, {"nodes", ids}});
  return Json{{"next_id", next_}, {"connections", conns}, {"splits", splits}};
}

InnovationRegistry InnovationRegistry::from_json(const Json& doc) {
  try {
    InnovationRegistry reg;
    reg.next_ = doc.at("next_id").get<Innovation>();
    for (const auto& row : doc.at("connections")) {
      reg.connections_[{row.at(0).get<Innovation>(), row.at(1).get<Innovation>()}] =
          row.at(2).get<Innovation>();
    }
    for (const auto& row : doc.at("splits")) {
      reg.splits_[row.at("connection").get<Innovation>()] =
          row.at("nodes").get<std::vector<Innovation>>();
    }
    return reg;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("registry: ") + e.what());
  }
}

}  // namespace breeder
