#include "breeder/canalization/labels.hpp"

#include <cstdio>

#include "breeder/error.hpp"

namespace breeder {

std::string to_hex(Rgb color) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", color.r, color.g, color.b);
  return buf;
}

Rgb rgb_from_hex(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') throw Error(ErrorCode::ParseError, "color must be #rrggbb");
  auto byte = [&](std::size_t at) {
    const std::string part(hex.substr(at, 2));
    char* end = nullptr;
    const long v = std::strtol(part.c_str(), &end, 16);
    if (end != part.c_str() + 2) throw Error(ErrorCode::ParseError, "bad color '" + std::string(hex) + "'");
    return static_cast<std::uint8_t>(v);
  };
  return {byte(1), byte(3), byte(5)};
}

LabelStore assign_label(LabelStore store, const Genome& genome, Innovation connection, std::string name,
                        Rgb color) {
  if (genome.find_connection(connection) == nullptr) {
    throw Error(ErrorCode::UnknownConnection, "connection " + std::to_string(connection));
  }
  if (store.genome_id.empty()) store.genome_id = genome.id;
  store.labels[connection] = {std::move(name), color};
  return store;
}

LabelStore rename_labels(LabelStore store, const std::string& from, const std::string& to) {
  for (auto& [id, label] : store.labels) {
    if (label.name == from) label.name = to;
  }
  return store;
}

std::optional<ConnectionLabel> node_label(const Genome& genome, const LabelStore& store, Innovation node) {
  const NodeGene* n = genome.find_node(node);
  if (n == nullptr) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node));
  if (is_input(n->kind)) return std::nullopt;

  struct Tally {
    int count = 0;
    Innovation first = 0;  // lowest incoming innovation carrying the label
    ConnectionLabel label;
  };
  std::map<std::string, Tally> tallies;
  for (const auto& c : genome.connections) {  // ascending innovation
    if (!c.enabled || c.target != node) continue;
    auto it = store.labels.find(c.innovation);
    if (it == store.labels.end()) continue;
    auto [slot, fresh] = tallies.try_emplace(it->second.name);
    if (fresh) {
      slot->second.first = c.innovation;
      slot->second.label = it->second;
    }
    ++slot->second.count;
  }
  const Tally* best = nullptr;
  for (const auto& [name, t] : tallies) {
    if (!best || t.count > best->count || (t.count == best->count && t.first < best->first)) best = &t;
  }
  if (!best) return std::nullopt;
  return best->label;
}

Json to_json(const LabelStore& store) {
  Json labels = Json::object();
  for (const auto& [id, label] : store.labels) {
    labels[std::to_string(id)] = {{"name", label.name}, {"color", to_hex(label.color)}};
  }
  return Json{{"genome_id", store.genome_id}, {"labels", labels}};
}

LabelStore label_store_from_json(const Json& doc) {
  try {
    LabelStore store;
    store.genome_id = doc.at("genome_id").get<std::string>();
    for (const auto& [key, value] : doc.at("labels").items()) {
      store.labels[std::stoull(key)] = {value.at("name").get<std::string>(),
                                        rgb_from_hex(value.at("color").get<std::string>())};
    }
    return store;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("label file: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ParseError, std::string("label file: bad connection key: ") + e.what());
  }
}

void save_labels(const LabelStore& store, const std::filesystem::path& path) {
  write_text_file(path, canonical(to_json(store)) + "\n");
}

LabelStore load_labels(const std::filesystem::path& path) { return label_store_from_json(read_json_file(path)); }

}  // namespace breeder
