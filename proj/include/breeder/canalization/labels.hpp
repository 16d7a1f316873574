#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "breeder/cppn/genome.hpp"
#include "breeder/cppn/genome_json.hpp"

namespace breeder {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

std::string to_hex(Rgb color);  // "#rrggbb"
Rgb rgb_from_hex(std::string_view hex);

struct ConnectionLabel {
  std::string name;
  Rgb color;
  bool operator==(const ConnectionLabel&) const = default;
};

struct LabelStore {
  std::string genome_id;
  std::map<Innovation, ConnectionLabel> labels;
};

// Records (or overwrites) the label of a connection of `genome`; throws
// Error(UnknownConnection) when the genome has no such gene.
LabelStore assign_label(LabelStore store, const Genome& genome, Innovation connection, std::string name,
                        Rgb color);

// Renames every label called `from` to `to`, keeping each connection's color.
LabelStore rename_labels(LabelStore store, const std::string& from, const std::string& to);

// Mode of the labels on the node's enabled incoming connections. Ties go to
// the tied label that owns the lowest-innovation incoming connection. Inputs
// and nodes without labeled incoming connections are unlabeled.
std::optional<ConnectionLabel> node_label(const Genome& genome, const LabelStore& store, Innovation node);

Json to_json(const LabelStore& store);
LabelStore label_store_from_json(const Json& doc);
void save_labels(const LabelStore& store, const std::filesystem::path& path);
LabelStore load_labels(const std::filesystem::path& path);

}  // namespace breeder
