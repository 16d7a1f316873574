#include "breeder/cppn/genome_json.hpp"

#include <fstream>
#include <sstream>

#include "breeder/error.hpp"

namespace breeder {

std::string canonical(const Json& doc) { return doc.dump(); }

Json genome_to_json(const GenomeDocument& doc) {
  const Genome& g = doc.genome;
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"innovation", n.innovation},
                     {"kind", std::string(to_string(n.kind))},
                     {"activation", std::string(to_string(n.activation))}});
  }
  Json connections = Json::array();
  for (const auto& c : g.connections) {
    connections.push_back({{"innovation", c.innovation},
                           {"source", c.source},
                           {"target", c.target},
                           {"weight", c.weight},
                           {"enabled", c.enabled}});
  }
  return Json{{"id", g.id},
              {"parent_id", doc.parent_id ? Json(*doc.parent_id) : Json(nullptr)},
              {"title", doc.title},
              {"author", doc.author},
              {"palette", std::string(to_string(g.palette))},
              {"nodes", std::move(nodes)},
              {"connections", std::move(connections)}};
}

Json genome_to_json(const Genome& genome) { return genome_to_json(GenomeDocument{genome, {}, "", ""}); }

GenomeDocument genome_document_from_json(const Json& doc) {
  try {
    GenomeDocument out;
    Genome& g = out.genome;
    g.id = doc.value("id", std::string{});
    g.palette = palette_from_string(doc.at("palette").get<std::string>());
    if (doc.contains("parent_id") && !doc.at("parent_id").is_null()) {
      out.parent_id = doc.at("parent_id").get<std::string>();
    }
    out.title = doc.value("title", std::string{});
    out.author = doc.value("author", std::string{});
    for (const auto& n : doc.at("nodes")) {
      g.nodes.push_back({n.at("innovation").get<Innovation>(),
                         node_kind_from_string(n.at("kind").get<std::string>()),
                         activation_from_string(n.at("activation").get<std::string>())});
    }
    for (const auto& c : doc.at("connections")) {
      g.connections.push_back({c.at("innovation").get<Innovation>(), c.at("source").get<Innovation>(),
                               c.at("target").get<Innovation>(), c.at("weight").get<double>(),
                               c.at("enabled").get<bool>()});
    }
    g.sort_genes();
    return out;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("genome document: ") + e.what());
  }
}

Genome genome_from_json(const Json& doc) { return genome_document_from_json(doc).genome; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(file);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << text;
}

GenomeDocument load_genome_file(const std::filesystem::path& path) {
  return genome_document_from_json(read_json_file(path));
}

void save_genome_file(const GenomeDocument& doc, const std::filesystem::path& path) {
  write_text_file(path, canonical(genome_to_json(doc)) + "\n");
}

}  // namespace breeder
