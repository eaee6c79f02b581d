#include "cclf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cclf/error.hpp"

namespace cclf {
namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

// Mean of the finite entries; NaN when there are none.
double finite_mean(const std::vector<double>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

}  // namespace

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size() || predictions.empty()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                         std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool truth = labels[i] == 1;
    if (pred && truth) ++c.tp;
    else if (pred) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

CategoryMetrics category_metrics(const ConfusionCounts& c) {
  if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
    fail(ErrorCode::kInvalidArgument, "confusion counts must be non-negative");
  }
  CategoryMetrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = f1_of(m.precision, m.recall);
  m.accuracy = ratio(c.tp + c.tn, c.total());

  // Same quantities with class 0 treated as positive.
  const double f1_negative = f1_of(ratio(c.tn, c.tn + c.fn), ratio(c.tn, c.tn + c.fp));
  const auto support_pos = c.tp + c.fn;
  const auto support_neg = c.tn + c.fp;
  m.weighted_f1 = support_pos + support_neg == 0
                      ? 0.0
                      : (static_cast<double>(support_pos) * m.f1 +
                         static_cast<double>(support_neg) * f1_negative) /
                            static_cast<double>(support_pos + support_neg);
  return m;
}

const BaselineTable& competition_baseline() {
  static const BaselineTable table = [] {
    BaselineTable t;
    auto add = [&](Language lang, const char* name, double p, double r, double f1, double wf1) {
      t.emplace(CategoryId{lang, name}, BaselineRow{p, r, f1, wf1});
    };
    add(Language::kJava, "Deprecation", 0.00, 0.00, 0.00, 0.92);
    add(Language::kJava, "Expand", 0.35, 0.27, 0.30, 0.66);
    add(Language::kJava, "Ownership", 1.00, 0.68, 0.81, 0.98);
    add(Language::kJava, "Pointer", 0.67, 0.24, 0.35, 0.84);
    add(Language::kJava, "Rational", 0.63, 0.30, 0.40, 0.88);
    add(Language::kJava, "Summary", 0.38, 0.29, 0.33, 0.78);
    add(Language::kJava, "Usage", 0.54, 0.36, 0.43, 0.62);
    add(Language::kPharo, "Classref", 0.33, 0.06, 0.10, 0.93);
    add(Language::kPharo, "Collaborators", 0.47, 0.25, 0.33, 0.91);
    add(Language::kPharo, "Example", 0.77, 0.43, 0.55, 0.68);
    add(Language::kPharo, "Intent", 0.58, 0.33, 0.42, 0.87);
    add(Language::kPharo, "Keyimpl", 0.18, 0.10, 0.13, 0.79);
    add(Language::kPharo, "Keymsg", 0.31, 0.16, 0.21, 0.76);
    add(Language::kPharo, "Resp", 0.59, 0.33, 0.43, 0.81);
    add(Language::kPython, "Devnotes", 0.17, 0.17, 0.17, 0.79);
    add(Language::kPython, "Expand", 0.26, 0.20, 0.22, 0.72);
    add(Language::kPython, "Parameters", 0.51, 0.22, 0.31, 0.65);
    add(Language::kPython, "Summary", 0.12, 0.08, 0.09, 0.71);
    add(Language::kPython, "Usage", 0.47, 0.18, 0.26, 0.63);
    return t;
  }();
  return table;
}

SubmissionScore submission_score(const std::map<CategoryId, double>& f1_by_category,
                                 const BaselineTable& baseline) {
  if (baseline.empty()) fail(ErrorCode::kInvalidArgument, "baseline table is empty");
  for (const auto& [category, f1] : f1_by_category) {
    if (!baseline.contains(category)) {
      fail(ErrorCode::kCategoryMismatch, category.str() + " has no baseline entry");
    }
  }
  double sum = 0.0;
  std::size_t outperformed = 0;
  for (const auto& [category, base] : baseline) {
    const auto it = f1_by_category.find(category);
    if (it == f1_by_category.end()) fail(ErrorCode::kMissingCategory, "no F1 for " + category.str());
    sum += it->second;
    if (it->second > base.f1) ++outperformed;
  }
  SubmissionScore s;
  const auto n = static_cast<double>(baseline.size());
  s.mean_f1 = sum / n;
  s.outperformed_fraction = static_cast<double>(outperformed) / n;
  s.score = s.mean_f1 * 0.75 + s.outperformed_fraction * 0.25;
  return s;
}

EvalReport build_report(std::span<const CategoryResult> results, const BaselineTable& baseline) {
  EvalReport report;
  for (const auto& r : results) {
    ReportRow row{r, std::nullopt, std::nullopt};
    if (auto it = baseline.find(r.category); it != baseline.end()) {
      row.baseline = it->second;
      row.delta_f1 = r.metrics.f1 - it->second.f1;
    }
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return a.result.category < b.result.category;
  });
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].result.category == report.rows[i - 1].result.category) {
      fail(ErrorCode::kCategoryMismatch, "category " + report.rows[i].result.category.str() +
                                             " appears twice in the report");
    }
  }

  std::vector<double> p, r, f1, wf1, acc;
  for (const auto& row : report.rows) {
    p.push_back(row.result.metrics.precision);
    r.push_back(row.result.metrics.recall);
    f1.push_back(row.result.metrics.f1);
    wf1.push_back(row.result.metrics.weighted_f1);
    acc.push_back(row.result.metrics.accuracy);
  }
  report.averages = {finite_mean(p), finite_mean(r), finite_mean(f1), finite_mean(wf1),
                     finite_mean(acc)};

  const bool complete =
      !baseline.empty() && report.rows.size() == baseline.size() &&
      std::all_of(report.rows.begin(), report.rows.end(),
                  [&](const ReportRow& row) { return row.baseline.has_value(); });
  if (complete) {
    std::map<CategoryId, double> by_category;
    for (const auto& row : report.rows) by_category[row.result.category] = row.result.metrics.f1;
    report.submission = submission_score(by_category, baseline);
  }
  return report;
}

AblationDelta ablation_delta(const EvalReport& with_classname, const EvalReport& sentence_only) {
  const auto& a = with_classname.rows;
  const auto& b = sentence_only.rows;
  const bool same = a.size() == b.size() &&
                    std::equal(a.begin(), a.end(), b.begin(), [](const ReportRow& x, const ReportRow& y) {
                      return x.result.category == y.result.category;
                    });
  if (!same) fail(ErrorCode::kCategoryMismatch, "ablation reports cover different categories");
  return {with_classname.averages.precision - sentence_only.averages.precision,
          with_classname.averages.recall - sentence_only.averages.recall,
          with_classname.averages.f1 - sentence_only.averages.f1};
}

}  // namespace cclf
