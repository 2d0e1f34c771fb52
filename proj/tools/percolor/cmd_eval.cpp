#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "percolor/error.hpp"
#include "percolor/evaluation.hpp"
#include "percolor/format.hpp"
#include "percolor/survey/service.hpp"

namespace percolor::cli {
namespace {

struct EvalArgs {
  std::string dataset;
  std::vector<std::string> metrics;
  std::string out;
  std::string heatmap;
  std::string judgments;
  std::string mode = "rating";
  bool spearman = false;
};

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> ids;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (!id.empty()) ids.push_back(id);
    }
  }
  return ids;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

DistanceTable select_columns(const DistanceTable& table, const std::vector<std::string>& ids) {
  DistanceTable out;
  out.rows = table.rows;
  for (const auto& id : ids) {
    const auto it = std::find(table.metrics.begin(), table.metrics.end(), id);
    if (it == table.metrics.end()) {
      std::string available;
      for (const auto& m : table.metrics) available += (available.empty() ? "" : ", ") + m;
      throw UsageError("metric '" + id + "' is not a column of this table (available: " +
                       available + ")");
    }
    out.metrics.push_back(id);
    out.columns.push_back(table.columns[static_cast<std::size_t>(it - table.metrics.begin())]);
  }
  return out;
}

ColorPairDataset attach_judgments(const ColorPairDataset& ds, const std::string& log_path,
                                  JudgmentMode mode) {
  std::ifstream in(log_path);
  if (!in) throw IoError("cannot read judgment log '" + log_path + "'");
  std::vector<JudgmentRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(survey::to_record(survey::judgment_from_json(line)));
  }
  return with_scores(ds, aggregate_judgments(records, ds, mode));
}

void print_ranking(const EvaluationReport& report) {
  std::cout << "pairs: " << report.pair_count << '\n';
  std::cout << std::left << std::setw(6) << "rank" << std::setw(14) << "metric" << std::right
            << std::setw(10) << "pearson_r" << std::setw(10) << "mae" << '\n';
  int rank = 1;
  for (const auto& s : report.scores) {
    const auto show = [](const std::optional<double>& v) { return v ? format_fixed(*v) : std::string("NA"); };
    std::cout << std::left << std::setw(6) << rank++ << std::setw(14) << s.metric << std::right
              << std::setw(10) << show(s.pearson_r) << std::setw(10) << show(s.mae);
    if (!s.note.empty()) std::cout << "  (" << s.note << ')';
    std::cout << '\n';
  }
}

int run_eval(const GlobalOptions& global, const EvalArgs& args) {
  const WhitePoint wp = parse_white(global.white);
  const auto ids = split_ids(args.metrics);
  EvaluationReport report;

  if (looks_like_scored_table(args.dataset)) {
    if (!args.judgments.empty()) {
      throw UsageError("--judgments applies to color-pair datasets, not precomputed tables");
    }
    const ScoredTable scored = load_scored_table(args.dataset);
    const DistanceTable table = ids.empty() ? scored.table : select_columns(scored.table, ids);
    report = build_report(table, scored.human, scored.source);
  } else {
    ColorPairDataset ds = load_dataset(args.dataset);
    if (!args.judgments.empty()) {
      ds = attach_judgments(ds, args.judgments, parse_judgment_mode(args.mode));
    }
    if (!ds.has_scores()) {
      throw UsageError("dataset '" + args.dataset +
                       "' has no human scores (add a score column or pass --judgments)");
    }
    const auto metric_ids = ids.empty() ? MetricRegistry::defaults().ids() : ids;
    const DistanceTable table = compute_distance_table(ds, metric_ids, wp);
    report = build_report(ds, table);
  }

  print_ranking(report);
  if (!args.out.empty()) write_text(args.out, format_report_csv(report, args.spearman));
  if (!args.heatmap.empty()) write_text(args.heatmap, render_heatmap(report));
  return kExitOk;
}

}  // namespace

void add_eval_command(CLI::App& app, const GlobalOptions& global, Runner& run) {
  auto args = std::make_shared<EvalArgs>();
  auto* cmd = app.add_subcommand("eval", "Correlate metric distances with human scores");
  cmd->add_option("dataset", args->dataset, "Color-pair dataset or precomputed distance table")
      ->required();
  cmd->add_option("--metrics", args->metrics, "Comma-separated metric ids (default: all)");
  cmd->add_option("--out", args->out, "Write the CSV report here");
  cmd->add_option("--heatmap", args->heatmap, "Write the SVG heatmap here");
  cmd->add_option("--judgments", args->judgments, "Take human scores from a judgment log");
  cmd->add_option("--mode", args->mode, "Judgment mode to aggregate: rating or 2afc")
      ->capture_default_str();
  cmd->add_flag("--spearman", args->spearman, "Add a spearman_rho column to the CSV");
  cmd->callback([&global, &run, args] { run = [&global, args] { return run_eval(global, *args); }; });
}

}  // namespace percolor::cli
