#pragma once

#include <map>
#include <string>
#include <vector>

#include "breeder/studio/store.hpp"

namespace breeder {

enum class Presence { Absent, Enabled, Disabled };

std::string_view to_string(Presence p);

struct LineageChain {
  std::vector<PublishRecord> records;  // root first, target last
  // For every connection innovation of the target: its state in each record
  // of the chain, aligned with `records`.
  std::map<Innovation, std::vector<Presence>> tracked_connections;
};

// Walks parent links from `image_id` to its root. Throws Error(UnknownImage).
LineageChain lineage(const Store& store, const std::string& image_id);

Json to_json(const LineageChain& chain);

}  // namespace breeder
