#include "cclf/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cclf/csv.hpp"
#include "cclf/error.hpp"
#include "cclf/textio.hpp"

namespace cclf {
namespace {

std::string num(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }
std::string num2(double v) { return std::isfinite(v) ? fmt::format("{:.2f}", v) : std::string("-"); }
std::string signed2(double v) { return fmt::format("{:+.2f}", v); }

std::size_t column(const csv::Row& header, std::string_view name, bool required,
                   const std::filesystem::path& path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  if (required) fail(ErrorCode::kMissingColumn, path.string() + ": no column named '" + std::string(name) + "'");
  return header.size();
}

double field_number(const csv::Row& row, std::size_t idx, const std::filesystem::path& path) {
  if (idx >= row.size() || row[idx].empty()) return std::nan("");
  try {
    return parse_double(row[idx]);
  } catch (const Error&) {
    fail(ErrorCode::kMalformedCsv, path.string() + ": '" + row[idx] + "' is not a number");
  }
}

}  // namespace

void write_report_csv(const EvalReport& report, std::ostream& out) {
  csv::write_row(out, {"language", "category", "precision", "recall", "f1", "weighted_f1", "accuracy",
                       "tp", "fp", "tn", "fn", "baseline_f1", "delta_f1"});
  for (const auto& row : report.rows) {
    const auto& m = row.result.metrics;
    const auto& c = row.result.counts;
    auto count = [&](std::int64_t v) { return c ? std::to_string(v) : std::string(); };
    csv::write_row(out, {std::string(to_string(row.result.category.language)), row.result.category.name,
                         num(m.precision), num(m.recall), num(m.f1), num(m.weighted_f1), num(m.accuracy),
                         count(c ? c->tp : 0), count(c ? c->fp : 0), count(c ? c->tn : 0),
                         count(c ? c->fn : 0), row.baseline ? num(row.baseline->f1) : "",
                         row.delta_f1 ? num(*row.delta_f1) : ""});
  }
  const auto& a = report.averages;
  csv::write_row(out, {"Average", "", num(a.precision), num(a.recall), num(a.f1), num(a.weighted_f1),
                       num(a.accuracy), "", "", "", "", "", ""});
}

void write_summary_csv(const EvalReport& report, std::ostream& out) {
  csv::write_row(out, {"key", "value"});
  csv::write_row(out, {"categories", std::to_string(report.rows.size())});
  csv::write_row(out, {"mean_precision", num(report.averages.precision)});
  csv::write_row(out, {"mean_recall", num(report.averages.recall)});
  csv::write_row(out, {"mean_f1", num(report.averages.f1)});
  csv::write_row(out, {"mean_weighted_f1", num(report.averages.weighted_f1)});
  if (report.submission) {
    csv::write_row(out, {"outperformed_fraction", num(report.submission->outperformed_fraction)});
    csv::write_row(out, {"submission_score", num(report.submission->score)});
  }
}

std::string render_table(const EvalReport& report) {
  std::string out;
  out += fmt::format("{:<8} {:<14} {:>5} {:>5} {:>5} {:>5} {:>5} | {:>6} {:>6}\n", "Language", "Category",
                     "P", "R", "F1", "wF1", "Acc", "BaseF1", "dF1");
  out += std::string(74, '-') + "\n";
  for (const auto& row : report.rows) {
    const auto& m = row.result.metrics;
    out += fmt::format("{:<8} {:<14} {:>5} {:>5} {:>5} {:>5} {:>5} | {:>6} {:>6}\n",
                       to_string(row.result.category.language), row.result.category.name,
                       num2(m.precision), num2(m.recall), num2(m.f1), num2(m.weighted_f1),
                       num2(m.accuracy), row.baseline ? num2(row.baseline->f1) : "-",
                       row.delta_f1 ? signed2(*row.delta_f1) : "-");
  }
  out += std::string(74, '-') + "\n";
  const auto& a = report.averages;
  out += fmt::format("{:<8} {:<14} {:>5} {:>5} {:>5} {:>5} {:>5}\n", "Average", "", num2(a.precision),
                     num2(a.recall), num2(a.f1), num2(a.weighted_f1), num2(a.accuracy));
  if (report.submission) {
    const auto& s = *report.submission;
    out += fmt::format("submission score = {:.2f} * 0.75 + {:.2f} * 0.25 = {:.2f}\n", s.mean_f1,
                       s.outperformed_fraction, s.score);
  } else {
    out += fmt::format("submission score: n/a ({} of 19 categories)\n", report.rows.size());
  }
  return out;
}

std::string render_f1_chart_svg(const EvalReport& report) {
  constexpr int kBarWidth = 14;
  constexpr int kGroupGap = 12;
  constexpr int kPlotHeight = 240;
  constexpr int kLeft = 40;
  constexpr int kTop = 30;
  constexpr int kLabelSpace = 110;
  const int groups = static_cast<int>(report.rows.size());
  const int width = kLeft + groups * (2 * kBarWidth + kGroupGap) + 20;
  const int height = kTop + kPlotHeight + kLabelSpace;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"10\">\n",
      width, height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{}\" y=\"16\" font-size=\"12\">F1 per category (dark) vs baseline (light)</text>\n",
                     kLeft);
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick / 4.0;
    const int y = kTop + kPlotHeight - static_cast<int>(std::lround(v * kPlotHeight));
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", kLeft, y,
                       width - 10, y);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.2f}</text>\n", kLeft - 4, y + 3, v);
  }
  int x = kLeft + kGroupGap / 2;
  for (const auto& row : report.rows) {
    auto bar = [&](double value, const char* colour, int offset) {
      const double v = std::clamp(std::isfinite(value) ? value : 0.0, 0.0, 1.0);
      const int h = static_cast<int>(std::lround(v * kPlotHeight));
      svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", x + offset,
                         kTop + kPlotHeight - h, kBarWidth, h, colour);
    };
    bar(row.result.metrics.f1, "#1f4e79", 0);
    if (row.baseline) bar(row.baseline->f1, "#9dc3e6", kBarWidth);
    const int lx = x + kBarWidth;
    const int ly = kTop + kPlotHeight + 8;
    svg += fmt::format("<text x=\"{}\" y=\"{}\" transform=\"rotate(60 {} {})\">{}</text>\n", lx, ly, lx, ly,
                       row.result.category.str());
    x += 2 * kBarWidth + kGroupGap;
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<CategoryResult> read_results_csv(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.size() < 2) fail(ErrorCode::kEmptyFile, path.string() + " has no result rows");
  const auto& h = rows.front();
  const auto i_lang = column(h, "language", true, path);
  const auto i_cat = column(h, "category", true, path);
  const auto i_p = column(h, "precision", true, path);
  const auto i_r = column(h, "recall", true, path);
  const auto i_f1 = column(h, "f1", true, path);
  const auto i_wf1 = column(h, "weighted_f1", false, path);
  const auto i_acc = column(h, "accuracy", false, path);
  const std::size_t i_counts[4] = {column(h, "tp", false, path), column(h, "fp", false, path),
                                   column(h, "tn", false, path), column(h, "fn", false, path)};

  std::vector<CategoryResult> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max({i_lang, i_cat, i_p, i_r, i_f1})) {
      fail(ErrorCode::kMalformedCsv, path.string() + ": row " + std::to_string(r) + " is too short");
    }
    if (row[i_lang] == "Average") continue;
    const auto language = parse_language(row[i_lang]);
    if (!language) fail(ErrorCode::kUnknownCategory, path.string() + ": unknown language '" + row[i_lang] + "'");

    CategoryResult result;
    result.category = make_category(*language, row[i_cat]);
    double counts[4];
    bool have_counts = true;
    for (int k = 0; k < 4; ++k) {
      counts[k] = field_number(row, i_counts[k], path);
      have_counts = have_counts && std::isfinite(counts[k]);
    }
    if (have_counts) {
      result.counts = ConfusionCounts{static_cast<std::int64_t>(counts[0]), static_cast<std::int64_t>(counts[1]),
                                      static_cast<std::int64_t>(counts[2]), static_cast<std::int64_t>(counts[3])};
      result.metrics = category_metrics(*result.counts);
    } else {
      result.metrics.precision = field_number(row, i_p, path);
      result.metrics.recall = field_number(row, i_r, path);
      result.metrics.f1 = field_number(row, i_f1, path);
      result.metrics.weighted_f1 = field_number(row, i_wf1, path);
      result.metrics.accuracy = field_number(row, i_acc, path);
      if (!std::isfinite(result.metrics.f1)) {
        fail(ErrorCode::kMalformedCsv, path.string() + ": row " + std::to_string(r) + " has no F1 value");
      }
    }
    out.push_back(std::move(result));
  }
  return out;
}

ConfusionCounts read_predictions_csv(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path);
  if (rows.size() < 2) fail(ErrorCode::kEmptyFile, path.string() + " has no prediction rows");
  const auto i_label = column(rows.front(), "label", true, path);
  const auto i_pred = column(rows.front(), "prediction", true, path);
  std::vector<int> labels, preds;
  auto binary = [&](const std::string& v, std::size_t r) {
    if (v == "0") return 0;
    if (v == "1") return 1;
    fail(ErrorCode::kBadLabel, path.string() + ": row " + std::to_string(r) + " value '" + v + "' is not 0/1");
  };
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max(i_label, i_pred)) {
      fail(ErrorCode::kMalformedCsv, path.string() + ": row " + std::to_string(r) + " is too short");
    }
    labels.push_back(binary(row[i_label], r));
    preds.push_back(binary(row[i_pred], r));
  }
  return confusion(preds, labels);
}

}  // namespace cclf
