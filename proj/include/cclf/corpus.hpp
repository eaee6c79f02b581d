#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cclf {

enum class Language { kJava, kPharo, kPython };

std::string_view to_string(Language language) noexcept;
std::optional<Language> parse_language(std::string_view text);

// A language-specific binary category such as Java/Ownership. Any name is
// representable so synthetic corpora can be loaded; is_reference_category()
// tells whether the pair is one of the 19 competition categories.
struct CategoryId {
  Language language = Language::kJava;
  std::string name;

  std::string str() const;  // "Java/Ownership"
  friend auto operator<=>(const CategoryId&, const CategoryId&) = default;
  friend bool operator==(const CategoryId&, const CategoryId&) = default;
};

// Accepts "Java/Ownership", "java:ownership" or "java_ownership". Known names
// and their long forms ("Collaborators", "Collab") resolve to the canonical
// spelling; unknown names are kept verbatim.
CategoryId parse_category(std::string_view text);
CategoryId make_category(Language language, std::string_view name);

// The 19 competition categories, ordered by language then name.
std::span<const CategoryId> reference_categories();
bool is_reference_category(const CategoryId& category);

enum class Partition { kTrain, kTest };

struct CommentSample {
  std::int64_t id = 0;
  std::string text;
  std::string class_file;
  Partition partition = Partition::kTrain;
  CategoryId category;
  int label = 0;

  friend bool operator==(const CommentSample&, const CommentSample&) = default;
};

struct SplitCounts {
  std::int64_t train_pos = 0;
  std::int64_t train_neg = 0;
  std::int64_t test_pos = 0;
  std::int64_t test_neg = 0;

  std::int64_t total() const { return train_pos + train_neg + test_pos + test_neg; }
  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct LoadWarning {
  std::size_t row = 0;  // 1-based data row, header excluded
  std::string message;
};

// Immutable once built; safe to share across threads for reading.
class CategoryDataset {
 public:
  // Validates every sample (category, label, non-blank text) and computes counts.
  static CategoryDataset from_samples(CategoryId category, std::vector<CommentSample> samples,
                                      std::vector<LoadWarning> warnings = {});

  const CategoryId& category() const { return category_; }
  const std::vector<CommentSample>& train() const { return train_; }
  const std::vector<CommentSample>& test() const { return test_; }
  const SplitCounts& counts() const { return counts_; }
  const std::vector<LoadWarning>& warnings() const { return warnings_; }

 private:
  CategoryDataset() = default;

  CategoryId category_;
  std::vector<CommentSample> train_;
  std::vector<CommentSample> test_;
  SplitCounts counts_;
  std::vector<LoadWarning> warnings_;
};

enum class FormattingVariant { kWithClassname, kSentenceOnly };

std::string_view to_string(FormattingVariant variant) noexcept;
std::optional<FormattingVariant> parse_variant(std::string_view text);

// with_classname: "{text} | {class_file}"; sentence_only: text unchanged.
// Pipes already present in text are not escaped.
std::string format_input(std::string_view text, std::string_view class_file,
                         FormattingVariant variant);
std::string format_input(const CommentSample& sample, FormattingVariant variant);

// Maps canonical column names to the header strings used in a file.
class ColumnMap {
 public:
  static constexpr std::string_view kId = "comment_sentence_id";
  static constexpr std::string_view kText = "comment_sentence";
  static constexpr std::string_view kClass = "class";
  static constexpr std::string_view kPartition = "partition";
  static constexpr std::string_view kCategory = "category";
  static constexpr std::string_view kLabel = "instance_type";

  static std::span<const std::string_view> canonical_names();

  // Parses "canonical=header,canonical=header".
  static ColumnMap parse(std::string_view spec);

  void set(std::string_view canonical, std::string header);
  std::string header_for(std::string_view canonical) const;

 private:
  std::map<std::string, std::string, std::less<>> aliases_;
};

// Loads a per-category file. Rows whose category column disagrees with
// `category` are rejected with CategoryMismatch.
CategoryDataset load_category(const std::filesystem::path& path, const CategoryId& category,
                              const ColumnMap& columns = {});

// Loads a per-language file holding rows for several categories and groups them.
std::vector<CategoryDataset> load_language_file(const std::filesystem::path& path,
                                                Language language, const ColumnMap& columns = {});

// Discovers <root>/<language>/<category>.csv files (directory and file names
// matched case-insensitively). A file named after the language itself, such as
// java/java.csv, is split by its category column. Result is sorted by category.
std::vector<CategoryDataset> load_corpus(const std::filesystem::path& root,
                                         const ColumnMap& columns = {});

// Writes the canonical six-column header, train rows then test rows.
void save_category(const CategoryDataset& dataset, const std::filesystem::path& path);

enum class DiscrepancyKind { kCountMismatch, kUnknownCategory };

struct Discrepancy {
  DiscrepancyKind kind = DiscrepancyKind::kCountMismatch;
  CategoryId category;
  std::string field;  // "train_pos", ...; empty for kUnknownCategory
  std::int64_t expected = 0;
  std::int64_t actual = 0;

  friend bool operator==(const Discrepancy&, const Discrepancy&) = default;
};

std::optional<SplitCounts> reference_counts(const CategoryId& category);

std::vector<Discrepancy> validate_against_reference(std::span<const CategoryDataset> datasets);

}  // namespace cclf
