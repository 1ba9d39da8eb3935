#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qperm/errors.hpp"
#include "qperm/specs.hpp"
#include "qperm/states.hpp"

namespace qperm {

struct ApiResponse {
  int status = 200;
  Json body;
};

/// Sessions keyed by opaque id. Each session has its own lock, so flips on
/// one session are serialized while distinct sessions run concurrently.
class SessionStore {
 public:
  struct Entry {
    std::mutex mutex;
    MeasurementSession session;
    std::shared_ptr<const GroupCache::Entry> group;
  };

  std::string add(std::shared_ptr<const GroupCache::Entry> group, QuantumPermutation initial, std::uint64_t seed);
  std::shared_ptr<Entry> find(const std::string& id) const;
  bool erase(const std::string& id);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

/// The session API independent of the transport, so it can be driven in-process.
///   POST   /api/session              {group, state, seed}
///   GET    /api/session/{id}
///   POST   /api/session/{id}/measure {position}
///   POST   /api/session/{id}/reset
///   DELETE /api/session/{id}
class Api {
 public:
  explicit Api(std::shared_ptr<GroupCache> cache = std::make_shared<GroupCache>());

  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

  SessionStore& store() { return store_; }
  GroupCache& cache() { return *cache_; }

 private:
  ApiResponse create(const Json& req);
  ApiResponse view(const std::string& id);
  ApiResponse measure(const std::string& id, const Json& req);
  ApiResponse reset(const std::string& id);
  ApiResponse remove(const std::string& id);

  std::shared_ptr<GroupCache> cache_;
  SessionStore store_;
};

/// HTTP status for a domain error.
int status_for(ErrorKind kind);

/// QPERM_PORT if set and valid, else 8080.
int default_port();

/// HTTP transport for an Api. JSON bodies, permissive CORS for the browser UI.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds an ephemeral port and returns it, or -1.
  int bind_any(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving the API. Returns false if the port could not be bound.
bool serve(Api& api, const std::string& host, int port);

/// The command-line front end. Exit codes: 0 ok, 1 domain error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Text grid of a Birkhoff slice, rows are outcomes and columns positions.
std::string render_slice(const BirkhoffSlice& s);

}  // namespace qperm
