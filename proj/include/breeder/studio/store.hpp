#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "breeder/canalization/labels.hpp"
#include "breeder/cppn/genome_json.hpp"
#include "breeder/neat/mutation.hpp"
#include "breeder/neat/registry.hpp"

namespace breeder {

struct PublishRecord {
  std::string genome_id;
  std::optional<std::string> parent_id;
  std::string title;
  std::string author;
  std::string created_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  MutationConfig config;
  Genome genome;  // genome.id == genome_id
};

Json to_json(const PublishRecord& record);
PublishRecord publish_record_from_json(const Json& doc);
GenomeDocument to_document(const PublishRecord& record);

std::string utc_timestamp(std::chrono::system_clock::time_point t);

// Directory-backed, append-only record log.
//
//   records.ndjson  one line per record: 8 hex digits of the CRC-32 of the
//                   canonical JSON, a space, the canonical JSON
//   index.json      {"count", "offsets": {id: byte offset}}; derived data,
//                   rebuilt from the log when missing or stale
//   registry.json   innovation registry shared by every session
//   labels/         one LabelStore per labeled image (annotations, mutable)
//
// Opening verifies every checksum and throws Error(StoreCorrupt) on the first
// mismatch or unparseable line. Appends are serialized; reads may run
// concurrently with each other and with appends.
class Store {
 public:
  explicit Store(std::filesystem::path dir);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& dir() const { return dir_; }

  // Appends a record. Throws Error(InvalidGenome) on a duplicate id or an
  // invalid genome and Error(UnknownImage) when parent_id is not stored.
  void append(const PublishRecord& record);

  // Fresh image id, "img-000001" style, unique within the store.
  std::string next_image_id();

  std::optional<PublishRecord> find(const std::string& id) const;
  // Throws Error(UnknownImage).
  PublishRecord get(const std::string& id) const;
  std::vector<PublishRecord> records() const;  // append order
  std::size_t size() const;
  std::size_t child_count(const std::string& id) const;

  std::shared_ptr<InnovationRegistry> registry() const { return registry_; }

  std::optional<LabelStore> labels(const std::string& id) const;
  void put_labels(const LabelStore& labels);

  // Rewrites the index and the registry file.
  void flush();

  // Index is rewritten after this many appends.
  static constexpr std::size_t kIndexInterval = 16;

 private:
  void load();
  void write_index_locked();
  void write_registry_locked();

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::vector<PublishRecord> records_;
  std::map<std::string, std::size_t> position_;  // id -> records_ index
  std::map<std::string, std::uintmax_t> offsets_;  // id -> byte offset in the log
  std::map<std::string, std::size_t> children_;
  std::uintmax_t log_size_ = 0;
  std::size_t since_index_ = 0;
  std::uint64_t next_image_ = 1;
  std::shared_ptr<InnovationRegistry> registry_;
};

// CRC-32 (zlib polynomial) as 8 lowercase hex digits.
std::string crc32_hex(const std::string& text);

}  // namespace breeder
