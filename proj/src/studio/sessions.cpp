#include "breeder/studio/sessions.hpp"

#include <random>

#include "breeder/error.hpp"

namespace breeder {

SessionRequest session_request_from_json(const Json& doc) {
  try {
    SessionRequest r;
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "session request must be an object");
    r.from = doc.value("from", std::string("scratch"));
    r.palette = palette_from_string(doc.value("palette", std::string("gray")));
    if (doc.contains("seed") && !doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
    r.size = doc.value("size", kDefaultPopulation);
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("session request: ") + e.what());
  }
}

SessionManager::SessionManager(Store& store, MutationConfig config, Clock clock)
    : store_(store), config_(config), clock_(std::move(clock)) {
  config_.check();
}

std::string SessionManager::create(const SessionRequest& request) {
  evict_idle();
  const std::uint64_t seed = request.seed ? *request.seed : std::random_device{}();
  std::string id;
  {
    std::lock_guard lock(table_mutex_);
    id = "session-" + std::to_string(++counter_);
  }
  auto e = std::make_shared<Entry>();
  e->rng.seed(seed);
  if (request.from == "scratch") {
    e->session = start_scratch(id, request.palette, request.size, store_.registry(), seed, e->rng);
  } else {
    const PublishRecord origin = store_.get(request.from);
    e->session = start_branch(id, origin.genome_id, origin.genome, request.size, store_.registry(), config_, seed,
                              e->rng);
  }
  e->last_used = clock_();
  std::lock_guard lock(table_mutex_);
  sessions_[id] = std::move(e);
  return id;
}

std::shared_ptr<SessionManager::Entry> SessionManager::entry(const std::string& id) {
  evict_idle();
  std::lock_guard lock(table_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

SessionView SessionManager::view(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  e->last_used = clock_();
  return {e->session, e->selected};
}

void SessionManager::select(const std::string& id, const std::vector<int>& slots) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  const int size = static_cast<int>(e->session.population.size());
  for (int s : slots) {
    if (s < 0 || s >= size) {
      throw Error(ErrorCode::IndexOutOfRange, "slot " + std::to_string(s) + " outside population of " +
                                                  std::to_string(size));
    }
  }
  e->selected = slots;
  e->last_used = clock_();
}

std::uint64_t SessionManager::next(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  e->session = next_generation(e->session, e->selected, config_, e->rng);
  e->selected.clear();
  e->last_used = clock_();
  return e->session.generation;
}

PublishRecord SessionManager::publish(const std::string& id, int slot, const std::string& title,
                                      const std::string& author) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  if (slot < 0 || slot >= static_cast<int>(e->session.population.size())) {
    throw Error(ErrorCode::InvalidSlot, "slot " + std::to_string(slot) + " is not in the population");
  }
  if (title.find_first_not_of(" \t\r\n") == std::string::npos) throw Error(ErrorCode::EmptyTitle, "title is empty");
  PublishRecord record;
  record.genome_id = store_.next_image_id();
  record.parent_id = e->session.origin;
  record.title = title;
  record.author = author;
  record.created_at = utc_timestamp(clock_());
  record.config = config_;
  record.genome = e->session.population[static_cast<std::size_t>(slot)];
  record.genome.id = record.genome_id;
  store_.append(record);
  e->last_used = clock_();
  return record;
}

std::size_t SessionManager::evict_idle() {
  const auto now = clock_();
  std::lock_guard lock(table_mutex_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    // A session in use right now is never idle; skip entries whose lock is held.
    std::unique_lock entry_lock(it->second->mutex, std::try_to_lock);
    if (entry_lock.owns_lock() && now - it->second->last_used > kSessionIdleLimit) {
      entry_lock.unlock();
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(table_mutex_);
  return sessions_.size();
}

}  // namespace breeder
