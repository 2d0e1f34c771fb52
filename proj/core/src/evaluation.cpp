#include "percolor/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "percolor/convert.hpp"
#include "percolor/error.hpp"
#include "percolor/format.hpp"
#include "percolor/parse.hpp"

namespace percolor {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(std::string_view s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid integer '" + std::string(s) + "'", line);
  }
  return v;
}

double parse_real(std::string_view s, int line) {
  // from_chars for double is missing from older libstdc++.
  const std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + text + "'", line);
  }
  return v;
}

// `# key: value` comment metadata.
void read_meta(std::string_view comment, std::map<std::string, std::string>& meta) {
  comment.remove_prefix(1);
  comment = trim(comment);
  const auto colon = comment.find(':');
  if (colon == std::string_view::npos || colon == 0) return;
  const auto key = trim(comment.substr(0, colon));
  if (key.find(' ') != std::string_view::npos) return;
  meta[std::string(key)] = std::string(trim(comment.substr(colon + 1)));
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

// Diverging ramp: -1 blue, 0 near-white, +1 red.
std::string ramp_color(double r) {
  struct Stop {
    double t;
    int rgb[3];
  };
  static constexpr Stop kStops[] = {
      {-1.0, {33, 102, 172}}, {-0.5, {146, 197, 222}}, {0.0, {247, 247, 247}},
      {0.5, {244, 165, 130}}, {1.0, {178, 24, 43}},
  };
  r = std::clamp(r, -1.0, 1.0);
  std::size_t i = 0;
  while (i + 2 < std::size(kStops) && r > kStops[i + 1].t) ++i;
  const double u = (r - kStops[i].t) / (kStops[i + 1].t - kStops[i].t);
  Srgb8 c;
  std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
  for (int k = 0; k < 3; ++k) {
    *ch[k] = static_cast<std::uint8_t>(
        std::lround(kStops[i].rgb[k] + u * (kStops[i + 1].rgb[k] - kStops[i].rgb[k])));
  }
  return to_hex(c);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::optional<std::size_t> ColorPairDataset::index_of(int id) const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].id == id) return i;
  }
  return std::nullopt;
}

ColorPairDataset parse_dataset(std::istream& in, const std::string& source) {
  ColorPairDataset ds;
  std::vector<double> scores;
  std::optional<bool> scored;
  std::set<int> ids;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      read_meta(line, ds.meta);
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError("expected id,#RRGGBB,#RRGGBB[,human_score]", line_no);
    }
    const bool has_score = fields.size() == 4;
    if (!scored) scored = has_score;
    if (*scored != has_score) {
      throw ParseError(*scored ? "missing human score" : "unexpected human score", line_no);
    }
    ColorPair pair;
    pair.id = parse_int(fields[0], line_no);
    if (!ids.insert(pair.id).second) {
      throw ParseError("duplicate pair id " + std::to_string(pair.id), line_no);
    }
    try {
      pair.a = parse_srgb(fields[1]);
      pair.b = parse_srgb(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (has_score) scores.push_back(parse_real(fields[3], line_no));
    ds.pairs.push_back(pair);
  }
  if (scored.value_or(false)) ds.human = std::move(scores);
  const auto it = ds.meta.find("source");
  ds.source = it != ds.meta.end() ? it->second : source;
  return ds;
}

ColorPairDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  try {
    return parse_dataset(in, path.string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

const std::vector<double>& DistanceTable::column(const std::string& metric) const {
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i] == metric) return columns[i];
  }
  throw UsageError("distance table has no column '" + metric + "'");
}

DistanceTable compute_distance_table(const ColorPairDataset& ds, std::span<const std::string> metric_ids,
                                     const WhitePoint& wp, const MetricRegistry& registry) {
  std::vector<const MetricDescriptor*> descs;
  for (const auto& id : metric_ids) descs.push_back(&registry.lookup(id));
  DistanceTable table;
  table.rows = ds.size();
  for (const auto* desc : descs) {
    table.metrics.push_back(desc->id);
    auto& col = table.columns.emplace_back();
    col.reserve(ds.size());
    for (const auto& pair : ds.pairs) col.push_back(evaluate(*desc, pair.a, pair.b, wp));
  }
  return table;
}

ScoredTable parse_scored_table(std::istream& in, const std::string& source) {
  ScoredTable out;
  out.source = source;
  std::map<std::string, std::string> meta;
  std::string raw;
  int line_no = 0;
  std::size_t human_col = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      read_meta(line, meta);
      continue;
    }
    const auto fields = split_csv(line);
    if (!have_header) {
      if (fields.size() < 3 || fields.front() != "pair" || fields.back() != "human") {
        throw ParseError("header must be pair,<metric>...,human", line_no);
      }
      for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
        out.table.metrics.emplace_back(fields[i]);
        out.table.columns.emplace_back();
      }
      human_col = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != human_col + 1) {
      throw ParseError("expected " + std::to_string(human_col + 1) + " fields", line_no);
    }
    out.pair_labels.emplace_back(fields[0]);
    for (std::size_t i = 1; i < human_col; ++i) {
      out.table.columns[i - 1].push_back(parse_real(fields[i], line_no));
    }
    out.human.push_back(parse_real(fields[human_col], line_no));
  }
  if (!have_header) throw ParseError("empty scored table");
  out.table.rows = out.human.size();
  if (auto it = meta.find("source"); it != meta.end()) out.source = it->second;
  return out;
}

ScoredTable load_scored_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table '" + path.string() + "'");
  try {
    return parse_scored_table(in, path.string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

bool looks_like_scored_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    return line.substr(0, 5) == "pair,";
  }
  return false;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("pearson: vectors differ in length");
  if (x.size() < 2) throw UsageError("pearson: need at least two values");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("spearman: vectors differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double mae_normalized(std::span<const double> metric, std::span<const double> human) {
  if (metric.size() != human.size()) throw UsageError("mae: vectors differ in length");
  if (metric.empty()) throw UsageError("mae: empty input");
  const auto [mlo, mhi] = std::minmax_element(metric.begin(), metric.end());
  const auto [hlo, hhi] = std::minmax_element(human.begin(), human.end());
  const double range = *mhi - *mlo;
  if (range == 0.0) throw DomainError("mae undefined: constant metric column");
  const double scale = (*hhi - *hlo) / range;
  double total = 0.0;
  for (std::size_t i = 0; i < metric.size(); ++i) {
    total += std::abs(*hlo + (metric[i] - *mlo) * scale - human[i]);
  }
  return total / static_cast<double>(metric.size());
}

const MetricScore* EvaluationReport::find(const std::string& metric) const {
  for (const auto& s : scores) {
    if (s.metric == metric) return &s;
  }
  return nullptr;
}

EvaluationReport build_report(const DistanceTable& table, std::span<const double> human,
                              std::string source) {
  if (table.metrics.size() != table.columns.size()) throw UsageError("malformed distance table");
  if (human.size() != table.rows) {
    throw UsageError("human scores (" + std::to_string(human.size()) +
                     ") do not align with distance table rows (" + std::to_string(table.rows) + ")");
  }
  EvaluationReport report;
  report.pair_count = table.rows;
  report.source = std::move(source);
  for (std::size_t m = 0; m < table.metrics.size(); ++m) {
    MetricScore score;
    score.metric = table.metrics[m];
    const auto& col = table.columns[m];
    if (col.size() != table.rows) throw UsageError("column '" + score.metric + "' is misaligned");
    try {
      score.pearson_r = pearson(col, human);
      score.spearman_rho = spearman(col, human);
    } catch (const Error& e) {
      score.note = e.what();
    }
    try {
      score.mae = mae_normalized(col, human);
    } catch (const Error& e) {
      if (score.note.empty()) score.note = e.what();
    }
    report.scores.push_back(std::move(score));
  }
  std::stable_sort(report.scores.begin(), report.scores.end(),
                   [](const MetricScore& a, const MetricScore& b) {
                     if (a.pearson_r.has_value() != b.pearson_r.has_value()) {
                       return a.pearson_r.has_value();
                     }
                     return a.pearson_r.value_or(0.0) > b.pearson_r.value_or(0.0);
                   });
  return report;
}

EvaluationReport build_report(const ColorPairDataset& ds, const DistanceTable& table) {
  if (!ds.human) throw UsageError("dataset has no human scores");
  return build_report(table, *ds.human, ds.source);
}

std::string format_report_csv(const EvaluationReport& report, bool with_spearman) {
  auto cell = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string("NA"); };
  std::ostringstream out;
  out << "metric,pearson_r,mae" << (with_spearman ? ",spearman_rho" : "") << '\n';
  for (const auto& s : report.scores) {
    out << s.metric << ',' << cell(s.pearson_r) << ',' << cell(s.mae);
    if (with_spearman) out << ',' << cell(s.spearman_rho);
    out << '\n';
  }
  return out.str();
}

std::string render_heatmap(const EvaluationReport& report) {
  if (report.scores.empty()) throw UsageError("heatmap needs at least one metric");
  constexpr int kCellW = 110;
  constexpr int kCellH = 60;
  constexpr int kLeft = 20;
  constexpr int kTop = 50;
  const int n = static_cast<int>(report.scores.size());
  const int width = kLeft * 2 + n * kCellW;
  const int height = kTop + kCellH + 30;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  svg << "  <title>Pearson correlation with human judgments (n=" << report.pair_count
      << ")</title>\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"#FFFFFF\"/>\n";
  for (int i = 0; i < n; ++i) {
    const auto& s = report.scores[static_cast<std::size_t>(i)];
    const int x = kLeft + i * kCellW;
    const std::string fill = s.pearson_r ? ramp_color(*s.pearson_r) : "#BDBDBD";
    const std::string label = s.pearson_r ? format_fixed(*s.pearson_r) : "NA";
    const bool dark = s.pearson_r && std::abs(*s.pearson_r) > 0.6;
    svg << "  <g class=\"cell\" data-metric=\"" << xml_escape(s.metric) << "\">\n";
    svg << "    <text x=\"" << x + kCellW / 2 << "\" y=\"" << kTop - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(s.metric) << "</text>\n";
    svg << "    <rect x=\"" << x << "\" y=\"" << kTop << "\" width=\"" << kCellW << "\" height=\""
        << kCellH << "\" fill=\"" << fill << "\" stroke=\"#FFFFFF\" stroke-width=\"2\"/>\n";
    svg << "    <text x=\"" << x + kCellW / 2 << "\" y=\"" << kTop + kCellH / 2 + 5
        << "\" text-anchor=\"middle\" font-size=\"15\" fill=\"" << (dark ? "#FFFFFF" : "#000000")
        << "\">" << label << "</text>\n";
    svg << "  </g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string_view to_string(JudgmentMode mode) {
  return mode == JudgmentMode::Rating ? "rating" : "2afc";
}

JudgmentMode parse_judgment_mode(std::string_view token) {
  if (token == "rating") return JudgmentMode::Rating;
  if (token == "2afc") return JudgmentMode::TwoAfc;
  throw UsageError("unknown mode '" + std::string(token) + "' (expected rating or 2afc)");
}

std::map<int, double> aggregate_judgments(std::span<const JudgmentRecord> log,
                                          const ColorPairDataset& ds, JudgmentMode mode) {
  if (log.empty()) throw UsageError("no judgments to aggregate");
  for (const auto& rec : log) {
    for (int id : rec.shown) {
      if (!ds.index_of(id)) throw UsageError("judgment references unknown pair id " + std::to_string(id));
    }
  }
  // Per pair: numerator and count. Rating sums scores; 2AFC counts wins.
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& rec : log) {
    if (rec.mode != mode) continue;
    if (mode == JudgmentMode::Rating) {
      if (rec.shown.size() != 1) throw UsageError("rating judgment must show exactly one pair");
      if (rec.response < kRatingMin || rec.response > kRatingMax) {
        throw UsageError("rating " + std::to_string(rec.response) + " outside the scale");
      }
      auto& a = acc[rec.shown.front()];
      a.first += rec.response;
      ++a.second;
    } else {
      if (rec.shown.size() != 2) throw UsageError("2afc judgment must show exactly two pairs");
      if (rec.response != rec.shown[0] && rec.response != rec.shown[1]) {
        throw UsageError("2afc choice " + std::to_string(rec.response) + " was not shown");
      }
      for (int id : rec.shown) {
        auto& a = acc[id];
        if (id == rec.response) a.first += 1.0;
        ++a.second;
      }
    }
  }
  std::map<int, double> out;
  const double scale = mode == JudgmentMode::Rating ? 1.0 : double(kRatingMax - kRatingMin);
  for (const auto& [id, a] : acc) out[id] = scale * a.first / static_cast<double>(a.second);
  return out;
}

ColorPairDataset with_scores(const ColorPairDataset& ds, const std::map<int, double>& scores) {
  ColorPairDataset out = ds;
  std::vector<double> human;
  human.reserve(ds.size());
  for (const auto& pair : ds.pairs) {
    const auto it = scores.find(pair.id);
    if (it == scores.end()) throw UsageError("no aggregated score for pair " + std::to_string(pair.id));
    human.push_back(it->second);
  }
  out.human = std::move(human);
  return out;
}

}  // namespace percolor
