#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "percolor/error.hpp"
#include "percolor/evaluation.hpp"
#include "percolor/survey/log.hpp"

namespace percolor::survey {

/// Unknown session or dataset.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Duplicate or out-of-order judgment.
class Conflict : public Error {
 public:
  using Error::Error;
};

struct DisplaySettings {
  Srgb8 background{128, 128, 128};
  /// Gap between the two patches of a pair, in device pixels. 0 = abutting.
  int separation_px = 0;
};

struct ServiceConfig {
  std::filesystem::path data_dir;
  std::filesystem::path dataset_dir;
  /// Maximum pair-of-pairs comparisons per 2AFC session.
  std::size_t twoafc_cap = 20;
};

struct Session {
  std::string session_id;
  JudgmentMode mode = JudgmentMode::Rating;
  std::string dataset;
  std::uint64_t seed = 0;
  std::string label;
  /// Stimulus ids in presentation order.
  std::vector<std::string> order;
  std::size_t cursor = 0;
  std::int64_t created_at = 0;

  std::size_t count() const { return order.size(); }
  bool done() const { return cursor >= order.size(); }
};

struct Stimulus {
  std::string stimulus_id;
  JudgmentMode mode = JudgmentMode::Rating;
  /// One pair (rating) or two pairs (2AFC), in display order.
  std::vector<ColorPair> pairs;
  DisplaySettings display;
  std::size_t index = 0;
  std::size_t count = 0;
};

/// One durable log record.
struct Judgment {
  std::string session_id;
  std::string dataset;
  std::string stimulus_id;
  JudgmentMode mode = JudgmentMode::Rating;
  int response = 0;
  std::int64_t elapsed_ms = 0;
  std::int64_t recorded_at = 0;
  /// Free-form client metadata (viewport, pixel ratio) as compact JSON text.
  std::string client;
};

struct Submission {
  std::string stimulus_id;
  int response = 0;
  std::int64_t elapsed_ms = 0;
  std::string client;
};

/// Aggregated human scores per mode for one dataset.
struct Aggregate {
  std::map<JudgmentMode, std::map<int, double>> scores;
  std::map<JudgmentMode, std::size_t> judgment_counts;
};

/// Rating stimulus ids are the pair id; 2AFC ids are "<first>-<second>".
std::vector<int> pairs_of_stimulus(const std::string& stimulus_id, JudgmentMode mode);

/// Stimulus order for a session: a seeded permutation of the pairs (rating)
/// or a seeded sample of at most `cap` unordered pair combinations with
/// seeded left/right placement (2AFC).
std::vector<std::string> build_schedule(const ColorPairDataset& ds, JudgmentMode mode,
                                        std::uint64_t seed, std::size_t cap);

std::string judgment_to_json(const Judgment& j);
/// Throws ParseError on a malformed record.
Judgment judgment_from_json(const std::string& line);
JudgmentRecord to_record(const Judgment& j);

/// Survey state machine over two append-only logs in `data_dir`
/// (sessions.jsonl, judgments.jsonl). All state is rebuilt from the logs on
/// construction, so a restarted service resumes every session at its
/// persisted cursor.
///
/// Thread-safe. Mutations of one session are serialized by that session's
/// lock; log appends are serialized globally.
class SurveyService {
 public:
  explicit SurveyService(ServiceConfig config);

  /// Registers a dataset under `name`, replacing any earlier one.
  void add_dataset(const std::string& name, ColorPairDataset ds);
  std::vector<std::string> dataset_names() const;
  /// Throws NotFound.
  std::shared_ptr<const ColorPairDataset> dataset(const std::string& name) const;
  DisplaySettings display_for(const std::string& name) const;

  /// Persists the session before returning. Throws NotFound for an unknown
  /// dataset.
  Session create_session(JudgmentMode mode, const std::string& dataset, std::uint64_t seed,
                         const std::string& label = {});
  Session session(const std::string& session_id) const;

  /// Stimulus at the cursor without advancing it; nullopt once exhausted.
  std::optional<Stimulus> next_stimulus(const std::string& session_id) const;

  /// Validates against the stimulus at the cursor, appends durably, then
  /// advances the cursor by one. Throws NotFound, Conflict (duplicate or
  /// out-of-order stimulus, finished session) or UsageError (response out
  /// of range).
  Judgment submit(const std::string& session_id, const Submission& submission);

  /// Throws UsageError when no judgments exist for the dataset.
  Aggregate aggregate(const std::string& dataset) const;

  /// Judgments for the dataset in log order.
  std::vector<Judgment> judgments(const std::string& dataset) const;
  /// Same, as LF-terminated JSON lines.
  std::string export_judgments(const std::string& dataset) const;

  /// Appends externally exported records (not bound to live sessions).
  /// Returns the number imported.
  std::size_t import_judgments(std::istream& in);

  std::size_t judgment_count() const;

 private:
  struct SessionSlot {
    mutable std::mutex mutex;
    Session session;
  };

  SessionSlot& slot(const std::string& session_id) const;
  void replay();

  ServiceConfig config_;
  mutable std::shared_mutex datasets_mutex_;
  std::map<std::string, std::shared_ptr<const ColorPairDataset>> datasets_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<SessionSlot>> sessions_;
  std::unique_ptr<AppendLog> session_log_;
  std::unique_ptr<AppendLog> judgment_log_;
  mutable std::mutex records_mutex_;
  std::vector<Judgment> records_;
};

/// Loads every `*.csv` / `*.txt` dataset in `dir`, named by file stem.
void load_dataset_directory(SurveyService& service, const std::filesystem::path& dir);

}  // namespace percolor::survey
