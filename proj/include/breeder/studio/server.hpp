#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "breeder/error.hpp"
#include "breeder/studio/sessions.hpp"
#include "breeder/studio/store.hpp"

namespace breeder {

inline constexpr const char* kVersion = "0.1.0";

struct ServerOptions {
  std::optional<std::filesystem::path> static_dir;  // mounted at /
  int default_image_size = 256;
  int max_image_size = 1024;
  int default_nulls = 10;
};

int http_status(ErrorCode code);

// HTTP/JSON front end over a store and a session manager.
//
//   GET  /health
//   POST /sessions                          {"from", "palette", "seed"?, "size"?}
//   GET  /sessions/{id}/population?size=
//   GET  /sessions/{id}/images/{slot}.png?size=
//   GET  /sessions/{id}/genomes/{slot}
//   POST /sessions/{id}/select              {"slots": [...]}
//   POST /sessions/{id}/next
//   POST /sessions/{id}/publish             {"slot", "title", "author"}
//   GET  /images
//   GET  /images/{id}                       publish record
//   GET  /images/{id}/genome
//   GET  /images/{id}/image.png?size=
//   GET  /images/{id}/lineage
//   GET  /images/{id}/sweep?connection=&lo=&hi=&step=&size=
//   GET  /images/{id}/sweep/frame.png?connection=&weight=&size=
//   GET  /images/{id}/sweep/impact.png?connection=&lo=&hi=&step=&size=&window=local|full
//   GET  /images/{id}/labels, PUT /images/{id}/labels
//   GET  /images/{id}/annotated.svg?modules=1
//   GET  /images/{id}/metrics?nulls=&seed=
//   GET  /corpus/report?nulls=&seed=&resamples=&format=json|csv
//
// Errors come back as {"error": code, "message"} with a status from
// http_status.
class StudioServer {
 public:
  StudioServer(Store& store, SessionManager& sessions, ServerOptions options = {});
  ~StudioServer();

  StudioServer(const StudioServer&) = delete;
  StudioServer& operator=(const StudioServer&) = delete;

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  // Throws Error(PortInUse).
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires bind().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServeConfig {
  std::filesystem::path store_dir = "studio-store";
  std::string host = "127.0.0.1";
  int port = 8080;
  ServerOptions options;
  MutationConfig mutation;
};

// Opens the store (Error(StoreCorrupt) on checksum failure), binds
// (Error(PortInUse)) and serves until SIGINT or SIGTERM, then flushes the
// store.
void serve(const ServeConfig& config);

}  // namespace breeder
