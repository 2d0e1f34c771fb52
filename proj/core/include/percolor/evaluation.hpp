#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percolor/color.hpp"
#include "percolor/metrics.hpp"

namespace percolor {

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

struct ColorPair {
  int id = 0;
  Srgb8 a;
  Srgb8 b;
};

/// Ordered color pairs with optional human scores, one per pair.
///
/// File format, one record per line:
///
///     id,#RRGGBB,#RRGGBB[,human_score]
///
/// Lines starting with `#` are comments. A comment of the form
/// `# key: value` is kept in `meta` (e.g. `source`, `separation`,
/// `background`). Either every record carries a score or none does.
struct ColorPairDataset {
  std::vector<ColorPair> pairs;
  std::optional<std::vector<double>> human;
  std::string source;
  std::map<std::string, std::string> meta;

  std::size_t size() const { return pairs.size(); }
  bool has_scores() const { return human.has_value(); }
  /// Index of the pair with `id`, or nullopt.
  std::optional<std::size_t> index_of(int id) const;
};

/// Throws ParseError (malformed record, duplicate id, inconsistent scores)
/// or IoError.
ColorPairDataset parse_dataset(std::istream& in, const std::string& source = {});
ColorPairDataset load_dataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// Per-metric distance columns aligned with the dataset pairs.
struct DistanceTable {
  std::vector<std::string> metrics;
  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;

  const std::vector<double>& column(const std::string& metric) const;
};

/// Unknown ids throw UsageError before any work is done.
DistanceTable compute_distance_table(const ColorPairDataset& ds, std::span<const std::string> metric_ids,
                                     const WhitePoint& wp = kD65,
                                     const MetricRegistry& registry = MetricRegistry::defaults());

/// Precomputed distance columns plus human scores, read from CSV whose
/// header is `pair,<metric>...,human`. Used for published reference tables
/// whose stimulus colors are unavailable.
struct ScoredTable {
  DistanceTable table;
  std::vector<double> human;
  std::vector<std::string> pair_labels;
  std::string source;
};

ScoredTable parse_scored_table(std::istream& in, const std::string& source = {});
ScoredTable load_scored_table(const std::filesystem::path& path);

/// True when the first non-comment line of the file starts with `pair,`.
bool looks_like_scored_table(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// Sample Pearson correlation. Throws UsageError for mismatched or short
/// input and DomainError when either vector has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (Pearson on average ranks).
double spearman(std::span<const double> x, std::span<const double> y);

/// Min-max rescales `metric` onto [min(human), max(human)] and returns the
/// mean absolute error against `human`. DomainError for a constant column.
double mae_normalized(std::span<const double> metric, std::span<const double> human);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct MetricScore {
  std::string metric;
  std::optional<double> pearson_r;
  std::optional<double> spearman_rho;
  std::optional<double> mae;
  /// Why a value is unavailable, empty otherwise.
  std::string note;
};

struct EvaluationReport {
  /// Ranked by pearson_r descending; unavailable correlations last.
  std::vector<MetricScore> scores;
  std::size_t pair_count = 0;
  std::string source;

  const MetricScore* find(const std::string& metric) const;
};

/// Per-metric failures are recorded as unavailable rather than thrown.
/// Throws UsageError when table and scores are misaligned.
EvaluationReport build_report(const DistanceTable& table, std::span<const double> human,
                              std::string source = {});
EvaluationReport build_report(const ColorPairDataset& ds, const DistanceTable& table);

/// CSV with header `metric,pearson_r,mae` (plus `spearman_rho` when asked),
/// 4 decimals, `NA` for unavailable values.
std::string format_report_csv(const EvaluationReport& report, bool with_spearman = false);

/// Standalone SVG: one row of cells colored on a diverging ramp over
/// [-1, 1] and annotated with r. Throws UsageError for an empty report.
std::string render_heatmap(const EvaluationReport& report);

// ---------------------------------------------------------------------------
// Human judgments
// ---------------------------------------------------------------------------

enum class JudgmentMode { Rating, TwoAfc };

std::string_view to_string(JudgmentMode mode);
/// "rating" or "2afc"; throws UsageError otherwise.
JudgmentMode parse_judgment_mode(std::string_view token);

inline constexpr int kRatingMin = 0;
inline constexpr int kRatingMax = 10;

/// One response, reduced to what aggregation needs. Rating: `shown` holds
/// one pair id and `response` is the rating. 2AFC: `shown` holds the two
/// pair ids and `response` is the chosen one.
struct JudgmentRecord {
  JudgmentMode mode = JudgmentMode::Rating;
  std::vector<int> shown;
  int response = 0;
};

/// Per-pair human scores for one mode: mean rating, or 2AFC win proportion
/// scaled to [0, 10]. Pairs never shown are absent. Throws UsageError for
/// an empty log, an unknown pair id or a response outside its mode.
std::map<int, double> aggregate_judgments(std::span<const JudgmentRecord> log,
                                          const ColorPairDataset& ds, JudgmentMode mode);

/// Copy of `ds` with human scores taken from `scores`. Throws UsageError if
/// any pair has no score.
ColorPairDataset with_scores(const ColorPairDataset& ds, const std::map<int, double>& scores);

}  // namespace percolor
