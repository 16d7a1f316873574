#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "breeder/cppn/genome.hpp"

namespace breeder {

using Json = nlohmann::json;

// Canonical form of every JSON document this project writes: keys sorted,
// no insignificant whitespace, shortest round-trip number formatting.
std::string canonical(const Json& doc);

Json genome_to_json(const GenomeDocument& doc);
Json genome_to_json(const Genome& genome);
// Parses a genome document; throws Error(ParseError) on malformed input. The
// genome is not validated here.
GenomeDocument genome_document_from_json(const Json& doc);
Genome genome_from_json(const Json& doc);

GenomeDocument load_genome_file(const std::filesystem::path& path);
void save_genome_file(const GenomeDocument& doc, const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace breeder
