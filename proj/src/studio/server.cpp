#include "breeder/studio/server.hpp"

#include <httplib.h>
#include <pthread.h>

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <list>
#include <mutex>
#include <thread>

#include "breeder/canalization/annotate.hpp"
#include "breeder/canalization/sweep.hpp"
#include "breeder/corpus/corpus.hpp"
#include "breeder/cppn/image.hpp"
#include "breeder/studio/lineage.hpp"

namespace breeder {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownConnection:
    case ErrorCode::UnknownGenome:
    case ErrorCode::UnknownImage:
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::Infeasible:
    case ErrorCode::Saturated:
    case ErrorCode::EmptyGraph:
    case ErrorCode::EmptyCorpus:
    case ErrorCode::AllZeros:
    case ErrorCode::DegenerateSample: return 422;
    case ErrorCode::StoreCorrupt: return 500;
    case ErrorCode::PortInUse: return 503;
    default: return 400;
  }
}

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const Json& doc, int status = 200) {
  res.status = status;
  res.set_content(canonical(doc), "application/json");
}

void send_error(Response& res, ErrorCode code, const std::string& message) {
  send_json(res, {{"error", std::string(to_string(code))}, {"message", message}}, http_status(code));
}

void send_png(Response& res, const ImageBuffer& image) {
  const auto bytes = encode_png(image);
  res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
}

Json parse_body(const Request& req) {
  try {
    return req.body.empty() ? Json::object() : Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("request body: ") + e.what());
  }
}

std::string param(const Request& req, const char* key, const std::string& fallback) {
  return req.has_param(key) ? req.get_param_value(key) : fallback;
}

double param_double(const Request& req, const char* key, double fallback) {
  if (!req.has_param(key)) return fallback;
  try {
    std::size_t used = 0;
    const std::string text = req.get_param_value(key);
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("query parameter '") + key + "' is not a number");
  }
}

std::uint64_t param_u64(const Request& req, const char* key, std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string text = req.get_param_value(key);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::ParseError, std::string("query parameter '") + key + "' is not a non-negative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, std::string("query parameter '") + key + "' is out of range");
  }
}

// Formats a weight the way the sweep grid stores it, so frame URLs round-trip.
std::string weight_text(double w) { return Json(w).dump(); }

}  // namespace

struct StudioServer::Impl {
  Store& store;
  SessionManager& sessions;
  ServerOptions options;
  httplib::Server http;
  bool bound = false;

  // Recently computed sweeps; a UI slider requests frames and impact maps for
  // the same sweep right after the summary.
  std::mutex sweep_mutex;
  std::list<std::pair<std::string, std::shared_ptr<const SweepResult>>> sweeps;
  static constexpr std::size_t kSweepCache = 4;

  Impl(Store& s, SessionManager& m, ServerOptions o) : store(s), sessions(m), options(std::move(o)) {
    // The library default adds SO_REUSEPORT, which would let a second server
    // silently share the port.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    routes();
  }

  int image_size(const Request& req) const {
    const auto size = param_u64(req, "size", static_cast<std::uint64_t>(options.default_image_size));
    if (size < 1 || size > static_cast<std::uint64_t>(options.max_image_size)) {
      throw Error(ErrorCode::ParseError, "size must lie in [1, " + std::to_string(options.max_image_size) + "]");
    }
    return static_cast<int>(size);
  }

  template <typename F>
  httplib::Server::Handler guarded(F f) {
    return [f](const Request& req, Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
      }
    };
  }

  std::shared_ptr<const SweepResult> cached_sweep(const std::string& image, const Request& req) {
    SweepSpec spec;
    spec.connection = param_u64(req, "connection", 0);
    if (!req.has_param("connection")) throw Error(ErrorCode::ParseError, "query parameter 'connection' is required");
    spec.lo = param_double(req, "lo", kWeightMin);
    spec.hi = param_double(req, "hi", kWeightMax);
    spec.step = param_double(req, "step", kCoarseStep);
    if (!(spec.step > 0) || !(spec.lo <= spec.hi)) throw Error(ErrorCode::ParseError, "need lo <= hi and step > 0");
    if ((spec.hi - spec.lo) / spec.step > 10000) throw Error(ErrorCode::TooLarge, "sweep grid exceeds 10000 frames");
    spec.width = spec.height = image_size(req);
    const std::string key = image + "|" + std::to_string(spec.connection) + "|" + weight_text(spec.lo) + "|" +
                            weight_text(spec.hi) + "|" + weight_text(spec.step) + "|" + std::to_string(spec.width);
    {
      std::lock_guard lock(sweep_mutex);
      for (auto it = sweeps.begin(); it != sweeps.end(); ++it) {
        if (it->first == key) {
          sweeps.splice(sweeps.begin(), sweeps, it);
          return sweeps.front().second;
        }
      }
    }
    auto result = std::make_shared<const SweepResult>(sweep(store.get(image).genome, spec));
    std::lock_guard lock(sweep_mutex);
    sweeps.emplace_front(key, result);
    if (sweeps.size() > kSweepCache) sweeps.pop_back();
    return result;
  }

  Json population_json(const std::string& id, int size) {
    const SessionView v = sessions.view(id);
    Json slots = Json::array();
    for (std::size_t k = 0; k < v.session.population.size(); ++k) {
      const bool selected = std::find(v.selected.begin(), v.selected.end(), static_cast<int>(k)) != v.selected.end();
      slots.push_back({{"slot", k},
                       {"genome_id", v.session.population[k].id},
                       {"image_url", "/sessions/" + id + "/images/" + std::to_string(k) +
                                         ".png?size=" + std::to_string(size)},
                       {"selected", selected}});
    }
    return Json{{"session_id", id},
                {"generation", v.session.generation},
                {"palette", std::string(to_string(v.session.palette))},
                {"origin", v.session.origin ? Json(*v.session.origin) : Json(nullptr)},
                {"size", size},
                {"slots", slots}};
  }

  const Genome& slot_genome(const SessionView& v, const std::string& slot_text) {
    const std::size_t slot = slot_text.size() > 6 ? SIZE_MAX : std::stoull(slot_text);
    if (slot >= v.session.population.size()) {
      throw Error(ErrorCode::InvalidSlot, "slot " + slot_text + " is not in the population");
    }
    return v.session.population[slot];
  }

  void routes() {
    http.Get("/health", guarded([](const Request&, Response& res) {
               send_json(res, {{"status", "ok"}, {"version", kVersion}});
             }));

    http.Post("/sessions", guarded([this](const Request& req, Response& res) {
                const std::string id = sessions.create(session_request_from_json(parse_body(req)));
                send_json(res, {{"session_id", id}}, 201);
              }));

    http.Get(R"(/sessions/([^/]+)/population)", guarded([this](const Request& req, Response& res) {
               send_json(res, population_json(req.matches[1], image_size(req)));
             }));

    http.Get(R"(/sessions/([^/]+)/images/(\d+)\.png)", guarded([this](const Request& req, Response& res) {
               const int size = image_size(req);
               const SessionView v = sessions.view(req.matches[1]);
               send_png(res, render(slot_genome(v, req.matches[2]), size, size));
             }));

    http.Get(R"(/sessions/([^/]+)/genomes/(\d+))", guarded([this](const Request& req, Response& res) {
               const SessionView v = sessions.view(req.matches[1]);
               send_json(res, genome_to_json(slot_genome(v, req.matches[2])));
             }));

    http.Post(R"(/sessions/([^/]+)/select)", guarded([this](const Request& req, Response& res) {
                const Json body = parse_body(req);
                std::vector<int> slots;
                try {
                  slots = body.at("slots").get<std::vector<int>>();
                } catch (const Json::exception& e) {
                  throw Error(ErrorCode::ParseError, std::string("select: ") + e.what());
                }
                sessions.select(req.matches[1], slots);
                res.status = 204;
              }));

    http.Post(R"(/sessions/([^/]+)/next)", guarded([this](const Request& req, Response& res) {
                send_json(res, {{"generation", sessions.next(req.matches[1])}});
              }));

    http.Post(R"(/sessions/([^/]+)/publish)", guarded([this](const Request& req, Response& res) {
                const Json body = parse_body(req);
                int slot = 0;
                std::string title, author;
                try {
                  slot = body.at("slot").get<int>();
                  title = body.value("title", std::string{});
                  author = body.value("author", std::string{});
                } catch (const Json::exception& e) {
                  throw Error(ErrorCode::InvalidSlot, std::string("publish: ") + e.what());
                }
                send_json(res, to_json(sessions.publish(req.matches[1], slot, title, author)), 201);
              }));

    http.Get("/images", guarded([this](const Request&, Response& res) {
               Json list = Json::array();
               for (const auto& r : store.records()) {
                 list.push_back({{"genome_id", r.genome_id},
                                 {"parent_id", r.parent_id ? Json(*r.parent_id) : Json(nullptr)},
                                 {"title", r.title},
                                 {"author", r.author},
                                 {"created_at", r.created_at}});
               }
               send_json(res, list);
             }));

    http.Get(R"(/images/([^/]+))", guarded([this](const Request& req, Response& res) {
               send_json(res, to_json(store.get(req.matches[1])));
             }));

    http.Get(R"(/images/([^/]+)/genome)", guarded([this](const Request& req, Response& res) {
               send_json(res, genome_to_json(to_document(store.get(req.matches[1]))));
             }));

    http.Get(R"(/images/([^/]+)/image\.png)", guarded([this](const Request& req, Response& res) {
               const int size = image_size(req);
               send_png(res, render(store.get(req.matches[1]).genome, size, size));
             }));

    http.Get(R"(/images/([^/]+)/lineage)", guarded([this](const Request& req, Response& res) {
               send_json(res, to_json(lineage(store, req.matches[1])));
             }));

    http.Get(R"(/images/([^/]+)/sweep)", guarded([this](const Request& req, Response& res) {
               const std::string image = req.matches[1];
               const auto result = cached_sweep(image, req);
               Json frames = Json::array();
               for (const auto& f : result->frames) {
                 frames.push_back({{"weight", f.weight},
                                   {"url", "/images/" + image + "/sweep/frame.png?connection=" +
                                               std::to_string(result->spec.connection) +
                                               "&weight=" + weight_text(f.weight) +
                                               "&size=" + std::to_string(result->spec.width)}});
               }
               send_json(res, {{"image_id", image}, {"summary", sweep_summary(*result)}, {"frames", frames}});
             }));

    http.Get(R"(/images/([^/]+)/sweep/frame\.png)", guarded([this](const Request& req, Response& res) {
               if (!req.has_param("connection") || !req.has_param("weight")) {
                 throw Error(ErrorCode::ParseError, "query parameters 'connection' and 'weight' are required");
               }
               const int size = image_size(req);
               const Genome g = store.get(req.matches[1]).genome;
               send_png(res, sweep_frame(g, param_u64(req, "connection", 0), param_double(req, "weight", 0.0), size,
                                         size));
             }));

    http.Get(R"(/images/([^/]+)/sweep/impact\.png)", guarded([this](const Request& req, Response& res) {
               const auto result = cached_sweep(req.matches[1], req);
               const bool full = param(req, "window", "local") == "full";
               const auto& map = full ? result->impact.full_range : result->impact.local_window;
               ImageBuffer img(result->impact.width, result->impact.height, 1);
               for (std::size_t i = 0; i < map.size(); ++i) img.data[i] = to_byte(map[i]);
               send_png(res, img);
             }));

    http.Get(R"(/images/([^/]+)/labels)", guarded([this](const Request& req, Response& res) {
               const std::string id = req.matches[1];
               store.get(id);
               const auto labels = store.labels(id);
               send_json(res, to_json(labels ? *labels : LabelStore{id, {}}));
             }));

    http.Put(R"(/images/([^/]+)/labels)", guarded([this](const Request& req, Response& res) {
               const std::string id = req.matches[1];
               const Genome genome = store.get(id).genome;
               Json body = parse_body(req);
               if (!body.contains("genome_id")) body["genome_id"] = id;
               const LabelStore incoming = label_store_from_json(body);
               if (incoming.genome_id != id) {
                 throw Error(ErrorCode::ParseError, "labels are for '" + incoming.genome_id + "', not '" + id + "'");
               }
               LabelStore checked{id, {}};
               for (const auto& [conn, label] : incoming.labels) {
                 checked = assign_label(std::move(checked), genome, conn, label.name, label.color);
               }
               store.put_labels(checked);
               send_json(res, to_json(checked));
             }));

    http.Get(R"(/images/([^/]+)/annotated\.svg)", guarded([this](const Request& req, Response& res) {
               const std::string id = req.matches[1];
               const Genome genome = store.get(id).genome;
               const auto labels = store.labels(id);
               ModuleOverlay modules;
               if (param(req, "modules", "0") == "1") {
                 const GenomeGraph gg = genome_to_graph(genome);
                 const Partition p = optimal_partition(gg.graph).partition;
                 for (std::size_t i = 0; i < gg.node_ids.size(); ++i) modules[gg.node_ids[i]] = p.assignment[i];
               }
               const auto out = annotate_export(genome, labels ? *labels : LabelStore{id, {}}, modules);
               res.set_content(out.svg, "image/svg+xml");
             }));

    http.Get(R"(/images/([^/]+)/metrics)", guarded([this](const Request& req, Response& res) {
               const PublishRecord r = store.get(req.matches[1]);
               NullModelConfig cfg;
               cfg.count = static_cast<int>(param_u64(req, "nulls", static_cast<std::uint64_t>(options.default_nulls)));
               if (cfg.count < 1 || cfg.count > 1000) throw Error(ErrorCode::ParseError, "nulls must lie in [1, 1000]");
               std::optional<PublishRecord> parent;
               if (r.parent_id) parent = store.find(*r.parent_id);
               const GenomeScores scores = score_genome(r.genome, parent ? &parent->genome : nullptr,
                                                        *store.registry(), param_u64(req, "seed", 0), cfg);
               Json out = to_json(scores);
               out["genome_id"] = r.genome_id;
               out["parent_id"] = r.parent_id ? Json(*r.parent_id) : Json(nullptr);
               out["nulls"] = cfg.count;
               send_json(res, out);
             }));

    http.Get("/corpus/report", guarded([this](const Request& req, Response& res) {
               NullModelConfig cfg;
               cfg.count = static_cast<int>(param_u64(req, "nulls", static_cast<std::uint64_t>(options.default_nulls)));
               if (cfg.count < 1 || cfg.count > 1000) throw Error(ErrorCode::ParseError, "nulls must lie in [1, 1000]");
               const std::uint64_t seed = param_u64(req, "seed", 0);
               ReportConfig rc;
               rc.resamples = static_cast<int>(param_u64(req, "resamples", kBootstrapResamples));
               if (rc.resamples < 1) throw Error(ErrorCode::ParseError, "resamples must be positive");
               std::vector<GenomeDocument> docs;
               for (const auto& r : store.records()) docs.push_back(to_document(r));
               const ScoredCorpus scored = score_corpus(docs, *store.registry(), seed, cfg);
               Rng rng(seed);
               const CorpusReport report = corpus_report(scored.records, rng, rc);
               if (param(req, "format", "json") == "csv") {
                 res.set_content(bins_csv(report), "text/csv");
                 return;
               }
               Json out = to_json(report);
               Json skipped = Json::array();
               for (const auto& s : scored.skipped) skipped.push_back({{"genome_id", s.genome_id}, {"reason", s.reason}});
               out["skipped"] = skipped;
               Json records = Json::array();
               for (const auto& r : scored.records) records.push_back(to_json(r));
               out["records"] = records;
               send_json(res, out);
             }));

    if (options.static_dir) http.set_mount_point("/", options.static_dir->string());
  }
};

StudioServer::StudioServer(Store& store, SessionManager& sessions, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, sessions, std::move(options))) {}

StudioServer::~StudioServer() { stop(); }

int StudioServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::PortInUse, "cannot bind " + host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::PortInUse, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound;
}

void StudioServer::listen() {
  if (!impl_->bound) throw Error(ErrorCode::PortInUse, "server is not bound");
  impl_->http.listen_after_bind();
}

void StudioServer::stop() { impl_->http.stop(); }

bool StudioServer::running() const { return impl_->http.is_running(); }

void serve(const ServeConfig& config) {
  // Block the shutdown signals here so every thread inherits the mask and a
  // dedicated waiter can stop the server outside signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Store store(config.store_dir);
  SessionManager sessions(store, config.mutation);
  StudioServer server(store, sessions, config.options);
  const int port = server.bind(config.host, config.port);
  std::fprintf(stderr, "studio %s listening on http://%s:%d (store %s)\n", kVersion, config.host.c_str(), port,
               config.store_dir.string().c_str());

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  store.flush();
  // listen() can also return on its own; wake the waiter so it can be joined.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
}

}  // namespace breeder
