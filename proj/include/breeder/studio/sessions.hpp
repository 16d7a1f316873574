#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "breeder/neat/session.hpp"
#include "breeder/studio/store.hpp"

namespace breeder {

using Clock = std::function<std::chrono::system_clock::time_point()>;

constexpr std::chrono::hours kSessionIdleLimit{24};

struct SessionRequest {
  std::string from = "scratch";  // "scratch" or a published image id
  Palette palette = Palette::Gray;
  std::optional<std::uint64_t> seed;
  int size = kDefaultPopulation;
};

SessionRequest session_request_from_json(const Json& doc);

// Read-only copy of a session's state.
struct SessionView {
  Session session;
  std::vector<int> selected;
};

// Live breeding sessions. Each session is serialized by its own mutex; the
// table itself by another. Sessions idle for longer than kSessionIdleLimit are
// dropped on the next access to the manager.
class SessionManager {
 public:
  explicit SessionManager(Store& store, MutationConfig config = {}, Clock clock = std::chrono::system_clock::now);

  // Throws Error(UnknownImage) when branching from an unpublished id and
  // Error(IndexOutOfRange) for population sizes outside 4..64.
  std::string create(const SessionRequest& request);

  SessionView view(const std::string& id);
  // Throws Error(IndexOutOfRange) for slots outside the population.
  void select(const std::string& id, const std::vector<int>& slots);
  // Throws Error(EmptySelection) when nothing is selected.
  std::uint64_t next(const std::string& id);
  // Throws Error(InvalidSlot) or Error(EmptyTitle).
  PublishRecord publish(const std::string& id, int slot, const std::string& title, const std::string& author);

  std::size_t evict_idle();
  std::size_t size() const;

  const MutationConfig& config() const { return config_; }

 private:
  struct Entry {
    std::mutex mutex;
    Session session;
    std::vector<int> selected;
    Rng rng;
    std::chrono::system_clock::time_point last_used;
  };

  std::shared_ptr<Entry> entry(const std::string& id);

  Store& store_;
  MutationConfig config_;
  Clock clock_;
  mutable std::mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace breeder
