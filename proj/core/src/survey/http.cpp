#include "percolor/survey/http.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "percolor/parse.hpp"

namespace percolor::survey {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

json pair_json(const ColorPair& p) { return json{{"id", p.id}, {"a", to_hex(p.a)}, {"b", to_hex(p.b)}}; }

json display_json(const DisplaySettings& d) {
  return json{{"background", to_hex(d.background)}, {"separation", d.separation_px}};
}

json session_json(const Session& s) {
  return json{{"session_id", s.session_id}, {"mode", to_string(s.mode)}, {"dataset", s.dataset},
              {"seed", s.seed},             {"count", s.count()},        {"cursor", s.cursor},
              {"label", s.label}};
}

json scores_json(const std::map<int, double>& scores) {
  json out = json::object();
  for (const auto& [id, v] : scores) out[std::to_string(id)] = v;
  return out;
}

std::string required_query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) throw UsageError(std::string("missing query parameter '") + key + "'");
  return req.get_param_value(key);
}

// Runs a handler, mapping library errors onto HTTP statuses.
template <typename F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const NotFound& e) {
      send_error(res, 404, e.what());
    } catch (const Conflict& e) {
      send_error(res, 409, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("bad request body: ") + e.what());
    } catch (const IoError& e) {
      send_error(res, 500, e.what());
    } catch (const Error& e) {
      send_error(res, 400, e.what());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  SurveyService& service;
  httplib::Server server;
  bool bound = false;
  std::atomic<bool> serving{false};

  explicit Impl(SurveyService& s) : service(s) {}

  void routes() {
    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body);
      const auto mode = parse_judgment_mode(body.value("mode", std::string("rating")));
      const auto dataset = body.at("dataset").get<std::string>();
      std::uint64_t seed = 0;
      if (body.contains("seed")) {
        seed = body["seed"].get<std::uint64_t>();
      } else {
        seed = (std::uint64_t(std::random_device{}()) << 32) | std::random_device{}();
      }
      const Session s = service.create_session(mode, dataset, seed, body.value("label", std::string()));
      send_json(res, 201, session_json(s));
    }));

    server.Get(R"(/api/sessions/([0-9a-zA-Z]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, session_json(service.session(req.matches[1])));
               }));

    server.Get(R"(/api/sessions/([0-9a-zA-Z]+)/next)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 const auto st = service.next_stimulus(id);
                 if (!st) {
                   send_json(res, 200, json{{"done", true}, {"count", service.session(id).count()}});
                   return;
                 }
                 json pairs = json::array();
                 for (const auto& p : st->pairs) pairs.push_back(pair_json(p));
                 send_json(res, 200,
                           json{{"done", false},
                                {"stimulus_id", st->stimulus_id},
                                {"mode", to_string(st->mode)},
                                {"index", st->index},
                                {"count", st->count},
                                {"pairs", pairs},
                                {"display", display_json(st->display)}});
               }));

    server.Post(R"(/api/sessions/([0-9a-zA-Z]+)/judgments)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = json::parse(req.body);
                  Submission sub;
                  sub.stimulus_id = body.at("stimulus_id").is_string()
                                        ? body["stimulus_id"].get<std::string>()
                                        : body["stimulus_id"].dump();
                  sub.response = body.at("response").get<int>();
                  sub.elapsed_ms = body.value("elapsed_ms", std::int64_t{0});
                  if (body.contains("client")) sub.client = body["client"].dump();
                  const std::string id = req.matches[1];
                  service.submit(id, sub);
                  send_json(res, 200, json{{"ok", true}, {"cursor", service.session(id).cursor}});
                }));

    server.Get("/api/aggregate", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto name = required_query(req, "dataset");
      const Aggregate agg = service.aggregate(name);
      json body{{"dataset", name}};
      for (const auto& [mode, scores] : agg.scores) {
        const std::string key(to_string(mode));
        body[key] = json{{"judgments", agg.judgment_counts.at(mode)}, {"scores", scores_json(scores)}};
      }
      send_json(res, 200, body);
    }));

    server.Get("/api/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto name = required_query(req, "dataset");
      service.dataset(name);
      res.set_content(service.export_judgments(name), "application/x-ndjson");
    }));

    server.Get("/api/dataset", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto name = required_query(req, "dataset");
      const auto ds = service.dataset(name);
      json pairs = json::array();
      for (const auto& p : ds->pairs) pairs.push_back(pair_json(p));
      send_json(res, 200,
                json{{"dataset", name},
                     {"source", ds->source},
                     {"pairs", pairs},
                     {"display", display_json(service.display_for(name))}});
    }));

    server.Get("/api/datasets", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, json{{"datasets", service.dataset_names()}});
    }));
  }
};

HttpServer::HttpServer(SurveyService& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  impl_->routes();
  if (!static_dir.empty() && !impl_->server.set_mount_point("/", static_dir.string())) {
    throw IoError("static directory not found: '" + static_dir.string() + "'");
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound_port;
}

void HttpServer::serve() {
  if (!impl_->bound) throw UsageError("serve() before bind()");
  impl_->serving = true;
  impl_->server.listen_after_bind();
  impl_->serving = false;
}

void HttpServer::stop() {
  // A stop that lands between serve() and the listener starting would be
  // lost, so wait for the listener first.
  while (impl_->serving && !impl_->server.is_running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  impl_->server.stop();
}

}  // namespace percolor::survey
