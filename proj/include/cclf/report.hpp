#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cclf/metrics.hpp"

namespace cclf {

// Per-category rows then an "Average" row. Columns:
//   language,category,precision,recall,f1,weighted_f1,accuracy,tp,fp,tn,fn,baseline_f1,delta_f1
// Numbers are written at full round-trip precision; unknown values are empty.
void write_report_csv(const EvalReport& report, std::ostream& out);

// key,value rows: categories, mean_f1, outperformed_fraction, submission_score.
void write_summary_csv(const EvalReport& report, std::ostream& out);

// Aligned plain-text table at two decimals.
std::string render_table(const EvalReport& report);

// Static SVG bar chart of F1 against the baseline F1 per category.
std::string render_f1_chart_svg(const EvalReport& report);

// Reads per-category metric rows. Requires language, category, precision,
// recall, f1; weighted_f1, accuracy and tp/fp/tn/fn are optional. When all
// four counts are present the metrics are recomputed from them. The
// "Average" row written by write_report_csv is skipped.
std::vector<CategoryResult> read_results_csv(const std::filesystem::path& path);

// Reads a predictions file with columns label,prediction (an optional id
// column is ignored) and returns its confusion counts.
ConfusionCounts read_predictions_csv(const std::filesystem::path& path);

}  // namespace cclf
