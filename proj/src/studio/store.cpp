#include "breeder/studio/store.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "breeder/error.hpp"

namespace breeder {

namespace fs = std::filesystem;

namespace {

constexpr const char* kLog = "records.ndjson";
constexpr const char* kIndex = "index.json";
constexpr const char* kRegistry = "registry.json";
constexpr const char* kImagePrefix = "img-";

// Ids become file names; anything outside [A-Za-z0-9_-] is percent-encoded.
std::string file_safe(const std::string& id) {
  std::ostringstream out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '-' || c == '_') {
      out << c;
    } else {
      out << '%' << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c) << std::dec;
    }
  }
  return out.str();
}

}  // namespace

std::string crc32_hex(const std::string& text) {
  const uLong crc = ::crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const PublishRecord& record) {
  return Json{{"genome_id", record.genome_id},
              {"parent_id", record.parent_id ? Json(*record.parent_id) : Json(nullptr)},
              {"title", record.title},
              {"author", record.author},
              {"created_at", record.created_at},
              {"config", to_json(record.config)},
              {"genome", genome_to_json(to_document(record))}};
}

PublishRecord publish_record_from_json(const Json& doc) {
  try {
    PublishRecord r;
    r.genome_id = doc.at("genome_id").get<std::string>();
    if (!doc.at("parent_id").is_null()) r.parent_id = doc.at("parent_id").get<std::string>();
    r.title = doc.at("title").get<std::string>();
    r.author = doc.at("author").get<std::string>();
    r.created_at = doc.at("created_at").get<std::string>();
    r.config = mutation_config_from_json(doc.at("config"));
    r.genome = genome_from_json(doc.at("genome"));
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("publish record: ") + e.what());
  }
}

GenomeDocument to_document(const PublishRecord& record) {
  return {record.genome, record.parent_id, record.title, record.author};
}

Store::Store(fs::path dir) : dir_(std::move(dir)), registry_(std::make_shared<InnovationRegistry>()) {
  fs::create_directories(dir_ / "labels");
  load();
}

Store::~Store() {
  try {
    flush();
  } catch (...) {
  }
}

void Store::load() {
  const fs::path log = dir_ / kLog;
  if (fs::exists(dir_ / kRegistry)) {
    try {
      *registry_ = InnovationRegistry::from_json(read_json_file(dir_ / kRegistry));
    } catch (const Error& e) {
      throw Error(ErrorCode::StoreCorrupt, std::string("registry: ") + e.what());
    }
  }
  if (fs::exists(log)) {
    std::ifstream in(log, std::ios::binary);
    std::string line;
    std::size_t line_no = 0;
    std::uintmax_t offset = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::uintmax_t start = offset;
      offset += line.size() + 1;
      if (line.empty()) continue;
      const auto corrupt = [&](const std::string& why) {
        return Error(ErrorCode::StoreCorrupt, log.string() + " line " + std::to_string(line_no) + ": " + why);
      };
      if (line.size() < 10 || line[8] != ' ') throw corrupt("malformed entry");
      const std::string body = line.substr(9);
      if (crc32_hex(body) != line.substr(0, 8)) throw corrupt("checksum mismatch");
      PublishRecord r;
      try {
        r = publish_record_from_json(Json::parse(body));
      } catch (const std::exception& e) {
        throw corrupt(e.what());
      }
      if (position_.count(r.genome_id)) throw corrupt("duplicate id " + r.genome_id);
      position_[r.genome_id] = records_.size();
      offsets_[r.genome_id] = start;
      if (r.parent_id) ++children_[*r.parent_id];
      if (r.genome_id.rfind(kImagePrefix, 0) == 0) {
        try {
          next_image_ = std::max<std::uint64_t>(next_image_, std::stoull(r.genome_id.substr(4)) + 1);
        } catch (const std::exception&) {
        }
      }
      registry_->observe(r.genome);
      records_.push_back(std::move(r));
    }
    log_size_ = offset;
  }

  bool index_current = false;
  if (fs::exists(dir_ / kIndex)) {
    try {
      const Json idx = read_json_file(dir_ / kIndex);
      index_current = idx.at("count").get<std::size_t>() == records_.size() &&
                      idx.at("offsets").get<std::map<std::string, std::uintmax_t>>() == offsets_;
    } catch (const std::exception&) {
      index_current = false;
    }
  }
  if (!index_current) write_index_locked();
}

void Store::write_index_locked() {
  Json offsets = Json::object();
  for (const auto& [id, off] : offsets_) offsets[id] = off;
  write_text_file(dir_ / kIndex, canonical(Json{{"count", records_.size()}, {"offsets", offsets}}) + "\n");
  since_index_ = 0;
}

void Store::write_registry_locked() { write_text_file(dir_ / kRegistry, canonical(registry_->to_json()) + "\n"); }

void Store::append(const PublishRecord& record) {
  PublishRecord r = record;
  r.genome.id = r.genome_id;
  require_valid(r.genome);
  const std::string body = canonical(to_json(r));

  std::unique_lock lock(mutex_);
  if (position_.count(r.genome_id)) throw Error(ErrorCode::InvalidGenome, "image '" + r.genome_id + "' exists");
  if (r.parent_id && !position_.count(*r.parent_id)) {
    throw Error(ErrorCode::UnknownImage, "parent '" + *r.parent_id + "' is not published");
  }
  const std::string line = crc32_hex(body) + " " + body + "\n";
  {
    std::ofstream out(dir_ / kLog, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) throw Error(ErrorCode::StoreCorrupt, "cannot append to " + (dir_ / kLog).string());
  }
  position_[r.genome_id] = records_.size();
  offsets_[r.genome_id] = log_size_;
  log_size_ += line.size();
  if (r.parent_id) ++children_[*r.parent_id];
  registry_->observe(r.genome);
  records_.push_back(std::move(r));
  if (++since_index_ >= kIndexInterval) {
    write_index_locked();
    write_registry_locked();
  }
}

std::string Store::next_image_id() {
  std::unique_lock lock(mutex_);
  std::ostringstream id;
  id << kImagePrefix << std::setw(6) << std::setfill('0') << next_image_++;
  return id.str();
}

std::optional<PublishRecord> Store::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = position_.find(id);
  if (it == position_.end()) return std::nullopt;
  return records_[it->second];
}

PublishRecord Store::get(const std::string& id) const {
  auto r = find(id);
  if (!r) throw Error(ErrorCode::UnknownImage, "no image '" + id + "'");
  return std::move(*r);
}

std::vector<PublishRecord> Store::records() const {
  std::shared_lock lock(mutex_);
  return records_;
}

std::size_t Store::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::size_t Store::child_count(const std::string& id) const {
  std::shared_lock lock(mutex_);
  if (!position_.count(id)) throw Error(ErrorCode::UnknownImage, "no image '" + id + "'");
  const auto it = children_.find(id);
  return it == children_.end() ? 0 : it->second;
}

std::optional<LabelStore> Store::labels(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const fs::path path = dir_ / "labels" / (file_safe(id) + ".json");
  if (!fs::exists(path)) return std::nullopt;
  return load_labels(path);
}

void Store::put_labels(const LabelStore& labels) {
  std::unique_lock lock(mutex_);
  if (!position_.count(labels.genome_id)) throw Error(ErrorCode::UnknownImage, "no image '" + labels.genome_id + "'");
  save_labels(labels, dir_ / "labels" / (file_safe(labels.genome_id) + ".json"));
}

void Store::flush() {
  std::unique_lock lock(mutex_);
  write_index_locked();
  write_registry_locked();
}

}  // namespace breeder
