#include <httplib.h>

#include <cstdlib>
#include <regex>

#include "qperm/errors.hpp"
#include "qperm/shell.hpp"

namespace qperm {

std::string SessionStore::add(std::shared_ptr<const GroupCache::Entry> group, QuantumPermutation initial,
                              std::uint64_t seed) {
  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(++counter_);
  auto entry = std::shared_ptr<Entry>(new Entry{{}, MeasurementSession(std::move(initial), seed, id), std::move(group)});
  sessions_.emplace(id, std::move(entry));
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool SessionStore::erase(const std::string& id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NullEvent:
      return 409;
    case ErrorKind::NoConvergence:
    case ErrorKind::InconsistentComultiplication:
    case ErrorKind::NoCounit:
    case ErrorKind::NoAntipode:
    case ErrorKind::NoHaar:
    case ErrorKind::NonUniqueHaar:
    case ErrorKind::DegenerateCentralElement:
      return 500;
    default:
      return 400;
  }
}

int default_port() {
  if (const char* env = std::getenv("QPERM_PORT")) {
    char* end = nullptr;
    const long p = std::strtol(env, &end, 10);
    if (end && *end == '\0' && p > 0 && p < 65536) return static_cast<int>(p);
  }
  return 8080;
}

namespace {

ApiResponse error(int status, const std::string& kind, const std::string& message) {
  return {status, Json{{"error", kind}, {"message", message}}};
}

ApiResponse not_found(const std::string& id) { return error(404, "NotFound", "no session '" + id + "'"); }

Json record_json(const MeasurementRecord& r) {
  return Json{{"position", r.position + 1},
              {"outcome", r.outcome + 1},
              {"probability", sig12(r.probability)},
              {"nonClassicalFlag", r.non_classical}};
}

Json session_json(const SessionStore::Entry& e) {
  const MeasurementSession& s = e.session;
  Json history = Json::array();
  for (const auto& r : s.history()) history.push_back(record_json(r));
  Json dist = Json::array();
  const FixedPoints fp = fixed_points_of(s.current(), e.group->fix_spectrum());
  for (const auto& [lambda, p] : fp.distribution) dist.push_back(Json{{"fixedPoints", sig12(lambda)}, {"probability", sig12(p)}});
  return Json{{"id", s.id()},
              {"n", s.current().h().n()},
              {"seed", s.seed()},
              {"slice", slice_to_json(birkhoff_slice(s.current()))},
              {"history", std::move(history)},
              {"fixedPointDistribution", std::move(dist)}};
}

}  // namespace

Api::Api(std::shared_ptr<GroupCache> cache) : cache_(std::move(cache)) {}

ApiResponse Api::create(const Json& req) {
  if (!req.is_object()) return error(400, "InvalidSpec", "request body must be an object");
  if (!req.contains("group")) return error(400, "InvalidSpec", "missing field 'group'");
  std::uint64_t seed = 0;
  if (req.contains("seed")) {
    if (!req["seed"].is_number_unsigned()) return error(400, "InvalidSpec", "seed must be a non-negative integer");
    seed = req["seed"].get<std::uint64_t>();
  }
  auto group = cache_->get(req["group"]);
  const Json state_spec = req.contains("state") ? req["state"] : Json{{"kind", "haar"}};
  QuantumPermutation initial = state_from_spec(group->group, state_spec);
  const std::string id = store_.add(group, initial, seed);
  return {200, Json{{"id", id}, {"n", group->group->n()}, {"slice", slice_to_json(birkhoff_slice(initial))}}};
}

ApiResponse Api::view(const std::string& id) {
  auto e = store_.find(id);
  if (!e) return not_found(id);
  std::lock_guard lock(e->mutex);
  return {200, session_json(*e)};
}

ApiResponse Api::measure(const std::string& id, const Json& req) {
  auto e = store_.find(id);
  if (!e) return not_found(id);
  if (!req.is_object() || !req.contains("position") || !req["position"].is_number_integer()) {
    return error(400, "InvalidSpec", "body must be {\"position\": 1..N}");
  }
  std::lock_guard lock(e->mutex);
  const long long pos = req["position"].get<long long>();
  const auto n = static_cast<long long>(e->session.current().h().n());
  if (pos < 1 || pos > n) return error(400, "IndexOutOfRange", "position outside 1.." + std::to_string(n));
  const MeasurementRecord r = e->session.measure(static_cast<std::size_t>(pos - 1));
  return {200, Json{{"outcome", r.outcome + 1},
                    {"probability", sig12(r.probability)},
                    {"slice", slice_to_json(birkhoff_slice(e->session.current()))},
                    {"nonClassicalFlag", r.non_classical}}};
}

ApiResponse Api::reset(const std::string& id) {
  auto e = store_.find(id);
  if (!e) return not_found(id);
  std::lock_guard lock(e->mutex);
  e->session.reset();
  return {200, session_json(*e)};
}

ApiResponse Api::remove(const std::string& id) {
  if (!store_.erase(id)) return not_found(id);
  return {200, Json{{"id", id}, {"deleted", true}}};
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex session_re(R"(^/api/session/([A-Za-z0-9_-]+)(/(measure|reset))?/?$)");
  try {
    auto parse_body = [&]() -> Json { return body.empty() ? Json::object() : Json::parse(body); };
    if (path == "/api/session" || path == "/api/session/") {
      if (method != "POST") return error(405, "MethodNotAllowed", method + " " + path);
      return create(parse_body());
    }
    std::smatch m;
    if (!std::regex_match(path, m, session_re)) return error(404, "NotFound", "no route " + path);
    const std::string id = m[1];
    const std::string action = m[3];
    if (action.empty()) {
      if (method == "GET") return view(id);
      if (method == "DELETE") return remove(id);
      return error(405, "MethodNotAllowed", method + " " + path);
    }
    if (method != "POST") return error(405, "MethodNotAllowed", method + " " + path);
    if (action == "measure") return measure(id, parse_body());
    return reset(id);
  } catch (const Json::exception& e) {
    return error(400, "InvalidSpec", std::string("unreadable body: ") + e.what());
  } catch (const Error& e) {
    return error(status_for(e.kind()), std::string(to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    return error(500, "Internal", e.what());
  }
}

struct HttpServer::Impl {
  httplib::Server svr;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>()) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto& svr = impl_->svr;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  svr.Get(".*", forward);
  svr.Post(".*", forward);
  svr.Delete(".*", forward);
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any(const std::string& host) { return impl_->svr.bind_to_any_port(host); }
bool HttpServer::bind(const std::string& host, int port) { return impl_->svr.bind_to_port(host, port); }
bool HttpServer::listen_after_bind() { return impl_->svr.listen_after_bind(); }
void HttpServer::stop() { impl_->svr.stop(); }

bool serve(Api& api, const std::string& host, int port) {
  HttpServer server(api);
  if (!server.bind(host, port)) return false;
  return server.listen_after_bind();
}

}  // namespace qperm
