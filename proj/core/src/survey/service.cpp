#include "percolor/survey/service.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "percolor/parse.hpp"
#include "percolor/random.hpp"

namespace percolor::survey {
namespace {

using nlohmann::json;

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string new_session_id() {
  static thread_local std::random_device device;
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", device());
    out << buf;
  }
  return out.str();
}

json session_to_json(const Session& s) {
  return json{{"type", "session"},        {"session_id", s.session_id}, {"mode", to_string(s.mode)},
              {"dataset", s.dataset},     {"seed", s.seed},             {"label", s.label},
              {"order", s.order},         {"created_at", s.created_at}};
}

Session session_from_json(const json& j) {
  Session s;
  s.session_id = j.at("session_id").get<std::string>();
  s.mode = parse_judgment_mode(j.at("mode").get<std::string>());
  s.dataset = j.at("dataset").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.label = j.value("label", "");
  s.order = j.at("order").get<std::vector<std::string>>();
  s.created_at = j.at("created_at").get<std::int64_t>();
  return s;
}

int parse_pair_id(const std::string& token, const std::string& whole) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (token.empty() || used != token.size()) throw UsageError("malformed stimulus id '" + whole + "'");
  return v;
}

}  // namespace

std::vector<int> pairs_of_stimulus(const std::string& stimulus_id, JudgmentMode mode) {
  if (mode == JudgmentMode::Rating) return {parse_pair_id(stimulus_id, stimulus_id)};
  // Ids may be negative, so split on the first '-' that follows a digit.
  for (std::size_t i = 1; i < stimulus_id.size(); ++i) {
    if (stimulus_id[i] == '-' && std::isdigit(static_cast<unsigned char>(stimulus_id[i - 1]))) {
      return {parse_pair_id(stimulus_id.substr(0, i), stimulus_id),
              parse_pair_id(stimulus_id.substr(i + 1), stimulus_id)};
    }
  }
  throw UsageError("malformed 2afc stimulus id '" + stimulus_id + "'");
}

std::vector<std::string> build_schedule(const ColorPairDataset& ds, JudgmentMode mode,
                                        std::uint64_t seed, std::size_t cap) {
  Rng rng(mix_seed(seed, 0));
  std::vector<std::string> order;
  if (mode == JudgmentMode::Rating) {
    std::vector<int> ids;
    for (const auto& p : ds.pairs) ids.push_back(p.id);
    rng.shuffle(std::span<int>(ids));
    for (int id : ids) order.push_back(std::to_string(id));
    return order;
  }
  std::vector<std::pair<int, int>> combos;
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.pairs.size(); ++j) combos.emplace_back(ds.pairs[i].id, ds.pairs[j].id);
  }
  rng.shuffle(std::span<std::pair<int, int>>(combos));
  combos.resize(std::min(combos.size(), cap));
  for (auto [a, b] : combos) {
    if (rng.index(2) == 1) std::swap(a, b);
    order.push_back(std::to_string(a) + "-" + std::to_string(b));
  }
  return order;
}

std::string judgment_to_json(const Judgment& j) {
  json out{{"session_id", j.session_id}, {"dataset", j.dataset},
           {"stimulus_id", j.stimulus_id}, {"mode", to_string(j.mode)},
           {"response", j.response},     {"elapsed_ms", j.elapsed_ms},
           {"recorded_at", j.recorded_at}};
  if (!j.client.empty()) out["client"] = json::parse(j.client, nullptr, false);
  return out.dump();
}

Judgment judgment_from_json(const std::string& line) {
  try {
    const json in = json::parse(line);
    Judgment j;
    j.session_id = in.at("session_id").get<std::string>();
    j.dataset = in.at("dataset").get<std::string>();
    j.stimulus_id = in.at("stimulus_id").get<std::string>();
    j.mode = parse_judgment_mode(in.at("mode").get<std::string>());
    j.response = in.at("response").get<int>();
    j.elapsed_ms = in.at("elapsed_ms").get<std::int64_t>();
    j.recorded_at = in.at("recorded_at").get<std::int64_t>();
    if (in.contains("client")) j.client = in["client"].dump();
    return j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed judgment record: ") + e.what());
  } catch (const UsageError& e) {
    throw ParseError(std::string("malformed judgment record: ") + e.what());
  }
}

JudgmentRecord to_record(const Judgment& j) {
  return {j.mode, pairs_of_stimulus(j.stimulus_id, j.mode), j.response};
}

SurveyService::SurveyService(ServiceConfig config) : config_(std::move(config)) {
  std::filesystem::create_directories(config_.data_dir);
  if (!config_.dataset_dir.empty()) load_dataset_directory(*this, config_.dataset_dir);
  session_log_ = std::make_unique<AppendLog>(config_.data_dir / "sessions.jsonl");
  judgment_log_ = std::make_unique<AppendLog>(config_.data_dir / "judgments.jsonl");
  replay();
}

void SurveyService::replay() {
  for (const auto& line : session_log_->replayed()) {
    auto s = session_from_json(json::parse(line));
    auto slot = std::make_unique<SessionSlot>();
    slot->session = std::move(s);
    sessions_[slot->session.session_id] = std::move(slot);
  }
  for (const auto& line : judgment_log_->replayed()) {
    Judgment j = judgment_from_json(line);
    if (auto it = sessions_.find(j.session_id); it != sessions_.end()) {
      Session& s = it->second->session;
      if (!s.done() && s.order[s.cursor] == j.stimulus_id) ++s.cursor;
    }
    records_.push_back(std::move(j));
  }
}

void SurveyService::add_dataset(const std::string& name, ColorPairDataset ds) {
  std::unique_lock lock(datasets_mutex_);
  datasets_[name] = std::make_shared<const ColorPairDataset>(std::move(ds));
}

std::vector<std::string> SurveyService::dataset_names() const {
  std::shared_lock lock(datasets_mutex_);
  std::vector<std::string> names;
  for (const auto& [name, _] : datasets_) names.push_back(name);
  return names;
}

std::shared_ptr<const ColorPairDataset> SurveyService::dataset(const std::string& name) const {
  std::shared_lock lock(datasets_mutex_);
  const auto it = datasets_.find(name);
  if (it == datasets_.end()) throw NotFound("unknown dataset '" + name + "'");
  return it->second;
}

DisplaySettings SurveyService::display_for(const std::string& name) const {
  const auto ds = dataset(name);
  DisplaySettings display;
  if (auto it = ds->meta.find("background"); it != ds->meta.end()) {
    display.background = parse_srgb(it->second);
  }
  if (auto it = ds->meta.find("separation"); it != ds->meta.end()) {
    display.separation_px = std::max(0, std::stoi(it->second));
  }
  return display;
}

Session SurveyService::create_session(JudgmentMode mode, const std::string& dataset_name,
                                      std::uint64_t seed, const std::string& label) {
  const auto ds = dataset(dataset_name);
  auto slot = std::make_unique<SessionSlot>();
  Session& s = slot->session;
  s.session_id = new_session_id();
  s.mode = mode;
  s.dataset = dataset_name;
  s.seed = seed;
  s.label = label;
  s.order = build_schedule(*ds, mode, seed, config_.twoafc_cap);
  s.created_at = now_ms();
  session_log_->append(session_to_json(s).dump());
  Session copy = s;
  std::unique_lock lock(sessions_mutex_);
  sessions_[copy.session_id] = std::move(slot);
  return copy;
}

SurveyService::SessionSlot& SurveyService::slot(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + session_id + "'");
  return *it->second;
}

Session SurveyService::session(const std::string& session_id) const {
  auto& sl = slot(session_id);
  std::lock_guard lock(sl.mutex);
  return sl.session;
}

std::optional<Stimulus> SurveyService::next_stimulus(const std::string& session_id) const {
  const Session s = session(session_id);
  if (s.done()) return std::nullopt;
  const auto ds = dataset(s.dataset);
  Stimulus st;
  st.stimulus_id = s.order[s.cursor];
  st.mode = s.mode;
  st.index = s.cursor;
  st.count = s.count();
  st.display = display_for(s.dataset);
  for (int id : pairs_of_stimulus(st.stimulus_id, s.mode)) {
    const auto idx = ds->index_of(id);
    if (!idx) throw NotFound("pair " + std::to_string(id) + " no longer in dataset '" + s.dataset + "'");
    st.pairs.push_back(ds->pairs[*idx]);
  }
  return st;
}

Judgment SurveyService::submit(const std::string& session_id, const Submission& submission) {
  auto& sl = slot(session_id);
  std::lock_guard lock(sl.mutex);
  Session& s = sl.session;
  if (s.done()) throw Conflict("session '" + session_id + "' is complete");
  const std::string& expected = s.order[s.cursor];
  if (submission.stimulus_id != expected) {
    const auto judged = s.order.begin() + static_cast<std::ptrdiff_t>(s.cursor);
    if (std::find(s.order.begin(), judged, submission.stimulus_id) != judged) {
      throw Conflict("duplicate judgment for stimulus '" + submission.stimulus_id + "'");
    }
    throw Conflict("out-of-order stimulus '" + submission.stimulus_id + "', expected '" + expected + "'");
  }
  if (s.mode == JudgmentMode::Rating) {
    if (submission.response < kRatingMin || submission.response > kRatingMax) {
      throw UsageError("rating " + std::to_string(submission.response) + " outside " +
                       std::to_string(kRatingMin) + ".." + std::to_string(kRatingMax));
    }
  } else {
    const auto shown = pairs_of_stimulus(expected, s.mode);
    if (std::find(shown.begin(), shown.end(), submission.response) == shown.end()) {
      throw UsageError("2afc response " + std::to_string(submission.response) +
                       " is not one of the shown pairs");
    }
  }
  if (submission.elapsed_ms < 0) throw UsageError("elapsed_ms must be non-negative");

  Judgment j;
  j.session_id = session_id;
  j.dataset = s.dataset;
  j.stimulus_id = expected;
  j.mode = s.mode;
  j.response = submission.response;
  j.elapsed_ms = submission.elapsed_ms;
  j.recorded_at = now_ms();
  j.client = submission.client;
  {
    std::lock_guard records_lock(records_mutex_);
    judgment_log_->append(judgment_to_json(j));
    records_.push_back(j);
  }
  ++s.cursor;
  return j;
}

std::vector<Judgment> SurveyService::judgments(const std::string& dataset_name) const {
  std::lock_guard lock(records_mutex_);
  std::vector<Judgment> out;
  for (const auto& j : records_) {
    if (j.dataset == dataset_name) out.push_back(j);
  }
  return out;
}

std::string SurveyService::export_judgments(const std::string& dataset_name) const {
  std::string out;
  for (const auto& j : judgments(dataset_name)) {
    out += judgment_to_json(j);
    out += '\n';
  }
  return out;
}

Aggregate SurveyService::aggregate(const std::string& dataset_name) const {
  const auto ds = dataset(dataset_name);
  const auto log = judgments(dataset_name);
  if (log.empty()) throw UsageError("no judgments recorded for dataset '" + dataset_name + "'");
  std::vector<JudgmentRecord> records;
  records.reserve(log.size());
  Aggregate out;
  for (const auto& j : log) {
    records.push_back(to_record(j));
    ++out.judgment_counts[j.mode];
  }
  for (const auto& [mode, _] : out.judgment_counts) {
    out.scores[mode] = aggregate_judgments(records, *ds, mode);
  }
  return out;
}

std::size_t SurveyService::import_judgments(std::istream& in) {
  std::vector<Judgment> parsed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    parsed.push_back(judgment_from_json(line));
  }
  std::lock_guard lock(records_mutex_);
  for (const auto& j : parsed) {
    judgment_log_->append(judgment_to_json(j));
    records_.push_back(j);
  }
  return parsed.size();
}

std::size_t SurveyService::judgment_count() const {
  std::lock_guard lock(records_mutex_);
  return records_.size();
}

void load_dataset_directory(SurveyService& service, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("dataset directory not found: '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".csv" || ext == ".txt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    // Scored distance tables share the directory but are not stimulus sets.
    if (looks_like_scored_table(f)) continue;
    service.add_dataset(f.stem().string(), load_dataset(f));
  }
}

}  // namespace percolor::survey
