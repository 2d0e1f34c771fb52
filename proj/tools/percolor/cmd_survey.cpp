#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <thread>

#include "commands.hpp"
#include "httplib.h"
#include "json.hpp"
#include "percolor/error.hpp"
#include "percolor/metrics.hpp"
#include "percolor/parse.hpp"
#include "percolor/random.hpp"
#include "percolor/survey/http.hpp"
#include "percolor/survey/service.hpp"

namespace percolor::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// serve
// ---------------------------------------------------------------------------

struct ServeArgs {
  std::string addr = "127.0.0.1:8080";
  std::string data_dir;
  std::string datasets;
  std::string static_dir;
  std::size_t twoafc_cap = 20;
};

std::pair<std::string, int> parse_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  const auto bad = [&] { return UsageError("invalid address '" + addr + "' (expected host:port)"); };
  if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size()) throw bad();
  const std::string host = addr.substr(0, colon);
  const std::string port_text = addr.substr(colon + 1);
  if (port_text.size() > 5 || !std::all_of(port_text.begin(), port_text.end(), ::isdigit)) throw bad();
  const int port = std::stoi(port_text);
  if (port > 65535) throw bad();
  return {host, port};
}

int run_serve(const ServeArgs& args) {
  const auto [host, port] = parse_addr(args.addr);
  if (args.twoafc_cap < 1) throw UsageError("--twoafc-cap must be at least 1");

  // Block the shutdown signals before any thread exists so every thread
  // inherits the mask and only the waiter below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  survey::ServiceConfig config;
  config.data_dir = args.data_dir;
  config.dataset_dir = args.datasets;
  config.twoafc_cap = args.twoafc_cap;
  survey::SurveyService service(config);
  survey::HttpServer server(service, args.static_dir);
  const int bound = server.bind(host, port);

  std::atomic<bool> finished{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    while (!finished) {
      server.stop();
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  });

  std::cout << "listening on http://" << host << ':' << bound << std::endl;
  std::cerr << "datasets:";
  for (const auto& name : service.dataset_names()) std::cerr << ' ' << name;
  std::cerr << "\njudgments on record: " << service.judgment_count() << std::endl;

  server.serve();
  finished = true;
  pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  std::cerr << "stopped" << std::endl;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string dataset;
  std::string url = "http://127.0.0.1:8080";
  int respondents = 15;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string oracle_metric = "lab_cie2000";
  std::string mode = "rating";
  std::string out;
  int retry_ms = 10000;
};

/// Standard normal draw from two uniforms (Box-Muller), portable across
/// standard libraries.
double gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class ApiClient {
 public:
  ApiClient(const std::string& url, int retry_ms) : client_(url), retry_ms_(retry_ms) {
    if (!client_.is_valid()) throw UsageError("invalid service url '" + url + "'");
    client_.set_connection_timeout(std::chrono::seconds(2));
    client_.set_read_timeout(std::chrono::seconds(10));
    client_.set_write_timeout(std::chrono::seconds(10));
  }

  struct Reply {
    int status = 0;
    json body;
  };

  // Transport failures (service down or restarting) are retried until the
  // budget runs out; HTTP errors are returned to the caller.
  Reply get(const std::string& path) {
    return send([&] { return client_.Get(path); }, path);
  }
  Reply post(const std::string& path, const json& body) {
    const std::string text = body.dump();
    return send([&] { return client_.Post(path, text, "application/json"); }, path);
  }

 private:
  template <typename F>
  Reply send(F&& call, const std::string& path) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(retry_ms_);
    while (true) {
      auto res = call();
      if (res) {
        Reply reply;
        reply.status = res->status;
        reply.body = json::parse(res->body, nullptr, false);
        return reply;
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        throw IoError("service unreachable (" + httplib::to_string(res.error()) + ") at " + path);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }

  httplib::Client client_;
  int retry_ms_;
};

std::string error_text(const ApiClient::Reply& r) {
  if (r.body.is_object() && r.body.contains("error")) return r.body["error"].get<std::string>();
  return "HTTP " + std::to_string(r.status);
}

int run_simulate(const GlobalOptions& global, const SimulateArgs& args) {
  const WhitePoint wp = parse_white(global.white);
  const auto& oracle = MetricRegistry::defaults().lookup(args.oracle_metric);
  const JudgmentMode mode = parse_judgment_mode(args.mode);
  if (args.respondents < 1) throw UsageError("--respondents must be at least 1");
  if (!(args.noise >= 0) || !std::isfinite(args.noise)) throw UsageError("--noise must be a finite value >= 0");
  if (args.retry_ms < 0) throw UsageError("--retry-ms must be non-negative");

  ApiClient api(args.url, args.retry_ms);
  const std::string query = "?dataset=" + httplib::detail::encode_query_param(args.dataset);
  const auto ds_reply = api.get("/api/dataset" + query);
  if (ds_reply.status == 404) throw UsageError("unknown dataset '" + args.dataset + "'");
  if (ds_reply.status != 200) throw Error("dataset fetch failed: " + error_text(ds_reply));

  // Oracle distances, min-max normalized onto the rating scale.
  std::map<int, double> perceived;
  for (const auto& p : ds_reply.body.at("pairs")) {
    const double d = evaluate(oracle, parse_srgb(p.at("a").get<std::string>()),
                              parse_srgb(p.at("b").get<std::string>()), wp);
    perceived[p.at("id").get<int>()] = d;
  }
  if (perceived.empty()) throw UsageError("dataset '" + args.dataset + "' is empty");
  const auto [lo, hi] = std::minmax_element(perceived.begin(), perceived.end(),
                                            [](const auto& x, const auto& y) { return x.second < y.second; });
  const double dmin = lo->second;
  const double span = hi->second - dmin;
  for (auto& [id, v] : perceived) {
    v = span > 0 ? kRatingMax * (v - dmin) / span : 0.5 * kRatingMax;
  }

  std::ofstream transcript;
  if (!args.out.empty()) {
    transcript.open(args.out, std::ios::binary | std::ios::trunc);
    if (!transcript) throw IoError("cannot write '" + args.out + "'");
  }

  std::size_t acknowledged = 0;
  for (int r = 0; r < args.respondents; ++r) {
    const std::uint64_t respondent_seed = mix_seed(args.seed, static_cast<std::uint64_t>(r));
    const std::uint64_t session_seed = mix_seed(respondent_seed, 0);
    const auto created = api.post("/api/sessions", json{{"mode", to_string(mode)},
                                                        {"dataset", args.dataset},
                                                        {"seed", session_seed},
                                                        {"label", "simulated-" + std::to_string(r)}});
    if (created.status != 201) throw Error("session creation failed: " + error_text(created));
    const std::string sid = created.body.at("session_id").get<std::string>();

    while (true) {
      const auto next = api.get("/api/sessions/" + sid + "/next");
      if (next.status != 200) throw Error("next stimulus failed: " + error_text(next));
      if (next.body.at("done").get<bool>()) break;

      const std::string stimulus_id = next.body.at("stimulus_id").get<std::string>();
      const auto index = next.body.at("index").get<std::uint64_t>();
      // Draws depend only on (respondent, position) so retries after a
      // service restart reproduce the same answer.
      Rng rng(mix_seed(respondent_seed, index + 1));
      const auto& shown = next.body.at("pairs");
      int response = 0;
      if (mode == JudgmentMode::Rating) {
        const double x = std::clamp(perceived.at(shown.at(0).at("id").get<int>()) + args.noise * gaussian(rng),
                                    double(kRatingMin), double(kRatingMax));
        // Stochastic rounding keeps the mean rating unbiased.
        response = std::min(kRatingMax, static_cast<int>(std::floor(x + rng.uniform())));
      } else {
        const int first = shown.at(0).at("id").get<int>();
        const int second = shown.at(1).at("id").get<int>();
        const double p1 = perceived.at(first) + args.noise * gaussian(rng);
        const double p2 = perceived.at(second) + args.noise * gaussian(rng);
        response = p2 > p1 ? second : first;
      }
      const auto elapsed_ms = static_cast<std::int64_t>(400 + rng.index(2600));

      const auto ack = api.post("/api/sessions/" + sid + "/judgments",
                                json{{"stimulus_id", stimulus_id},
                                     {"response", response},
                                     {"elapsed_ms", elapsed_ms},
                                     {"client", {{"agent", "percolor-simulate"}, {"respondent", r}}}});
      if (ack.status == 409) continue;  // already recorded before a lost reply; resync
      if (ack.status != 200) throw Error("judgment rejected: " + error_text(ack));
      ++acknowledged;
      if (transcript.is_open()) {
        transcript << json{{"respondent", r},
                           {"session_seed", session_seed},
                           {"stimulus_id", stimulus_id},
                           {"mode", to_string(mode)},
                           {"response", response},
                           {"elapsed_ms", elapsed_ms}}
                          .dump()
                   << '\n'
                   << std::flush;
      }
    }
  }

  std::cout << "respondents: " << args.respondents << '\n'
            << "acknowledged: " << acknowledged << '\n';
  return kExitOk;
}

}  // namespace

void add_survey_commands(CLI::App& app, const GlobalOptions& global, Runner& run) {
  auto serve = std::make_shared<ServeArgs>();
  auto* serve_cmd = app.add_subcommand("serve", "Run the survey HTTP service");
  serve_cmd->add_option("--addr", serve->addr, "Listen address host:port (port 0 picks one)")
      ->envname("PERCOLOR_ADDR")
      ->capture_default_str();
  serve_cmd->add_option("--data-dir", serve->data_dir, "Directory for the judgment logs")
      ->envname("PERCOLOR_DATA_DIR")
      ->required();
  serve_cmd->add_option("--datasets", serve->datasets, "Directory of color-pair datasets")
      ->envname("PERCOLOR_DATASETS")
      ->required();
  serve_cmd->add_option("--static-dir", serve->static_dir, "Browser UI bundle served at /")
      ->envname("PERCOLOR_STATIC_DIR");
  serve_cmd->add_option("--twoafc-cap", serve->twoafc_cap, "Comparisons per 2AFC session")
      ->capture_default_str();
  serve_cmd->callback([&run, serve] { run = [serve] { return run_serve(*serve); }; });

  auto sim = std::make_shared<SimulateArgs>();
  auto* sim_cmd = app.add_subcommand("simulate", "Drive the service with synthetic respondents");
  sim_cmd->add_option("dataset", sim->dataset, "Dataset name registered with the service")->required();
  sim_cmd->add_option("--url", sim->url, "Service base URL")->envname("PERCOLOR_URL")->capture_default_str();
  sim_cmd->add_option("--respondents", sim->respondents, "Synthetic respondents")->capture_default_str();
  sim_cmd->add_option("--noise", sim->noise, "Gaussian noise sigma on the 0-10 scale")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim->seed, "Seed for sessions and responses")->capture_default_str();
  sim_cmd->add_option("--oracle-metric", sim->oracle_metric, "Metric the respondents follow")
      ->capture_default_str();
  sim_cmd->add_option("--mode", sim->mode, "rating or 2afc")->capture_default_str();
  sim_cmd->add_option("--out", sim->out, "Write acknowledged responses as JSON lines");
  sim_cmd->add_option("--retry-ms", sim->retry_ms, "How long to retry an unreachable service")
      ->capture_default_str();
  sim_cmd->callback([&global, &run, sim] {
    run = [&global, sim] { return run_simulate(global, *sim); };
  });
}

}  // namespace percolor::cli
