#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cclf/corpus.hpp"

namespace cclf {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// accuracy is NaN when unknown (for example, metrics transcribed from a table).
struct CategoryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
};

// Positive class is 1. Throws LengthMismatch on unequal or empty inputs.
ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels);

// P := 0 when tp+fp = 0, R := 0 when tp+fn = 0, F1 := 0 when P+R = 0.
// weighted_f1 is the support-weighted mean of the class-1 and class-0 F1.
CategoryMetrics category_metrics(const ConfusionCounts& counts);

struct BaselineRow {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double weighted_f1 = 0.0;
};

using BaselineTable = std::map<CategoryId, BaselineRow>;

// Random-forest baseline scores published with the competition (19 entries).
const BaselineTable& competition_baseline();

struct SubmissionScore {
  double mean_f1 = 0.0;
  double outperformed_fraction = 0.0;  // strict F1_c > baseline F1_c, over |C|
  double score = 0.0;                  // 0.75 * mean_f1 + 0.25 * fraction
};

// Needs exactly the baseline's categories; throws MissingCategory or
// CategoryMismatch otherwise.
SubmissionScore submission_score(const std::map<CategoryId, double>& f1_by_category,
                                 const BaselineTable& baseline);

struct CategoryResult {
  CategoryId category;
  CategoryMetrics metrics;
  std::optional<ConfusionCounts> counts;
};

struct ReportRow {
  CategoryResult result;
  std::optional<BaselineRow> baseline;
  std::optional<double> delta_f1;
};

struct EvalReport {
  std::vector<ReportRow> rows;  // sorted by category
  CategoryMetrics averages;     // unweighted means over rows
  std::optional<SubmissionScore> submission;  // only when all baseline categories are present
};

// Rows may cover any subset of categories; duplicates throw CategoryMismatch.
EvalReport build_report(std::span<const CategoryResult> results, const BaselineTable& baseline);

struct AblationDelta {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Average-metric differences (with - without); category sets must match.
AblationDelta ablation_delta(const EvalReport& with_classname, const EvalReport& sentence_only);

}  // namespace cclf
