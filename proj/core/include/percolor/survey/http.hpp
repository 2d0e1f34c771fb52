#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "percolor/survey/service.hpp"

namespace percolor::survey {

/// JSON-over-HTTP front end for a SurveyService.
///
///     POST /api/sessions                 {mode, dataset, seed, label?}
///     GET  /api/sessions/{id}            session state
///     GET  /api/sessions/{id}/next       stimulus or {done: true}
///     POST /api/sessions/{id}/judgments  {stimulus_id, response, elapsed_ms, client?}
///     GET  /api/aggregate?dataset=...
///     GET  /api/export?dataset=...       line-delimited judgment records
///     GET  /api/dataset?dataset=...      pairs as hex plus display settings
///     GET  /api/datasets
///
/// Errors are `{"error": "..."}` with 400 (bad input), 404 (unknown
/// session or dataset) or 409 (duplicate / out-of-order judgment).
class HttpServer {
 public:
  /// `static_dir`, when non-empty, is served at `/` (the browser UI bundle).
  explicit HttpServer(SurveyService& service, std::filesystem::path static_dir = {});
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns the bound
  /// port; throws IoError on failure.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  void serve();

  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace percolor::survey
