#include "cclf/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "cclf/csv.hpp"
#include "cclf/error.hpp"

namespace cclf {
namespace {

std::string lower_alnum(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

struct ReferenceRow {
  Language language;
  std::string_view name;
  SplitCounts counts;
};

// Dataset properties of the competition corpus (train pos/neg, test pos/neg).
constexpr std::array<ReferenceRow, 19> kReferenceRows{{
    {Language::kJava, "Deprecation", {100, 1831, 27, 460}},
    {Language::kJava, "Expand", {505, 1426, 127, 360}},
    {Language::kJava, "Ownership", {90, 1839, 25, 464}},
    {Language::kJava, "Pointer", {289, 1640, 75, 414}},
    {Language::kJava, "Rational", {223, 1707, 57, 431}},
    {Language::kJava, "Summary", {328, 1600, 87, 403}},
    {Language::kJava, "Usage", {728, 1203, 184, 303}},
    {Language::kPharo, "Classref", {60, 1348, 17, 340}},
    {Language::kPharo, "Collaborators", {99, 1307, 28, 331}},
    {Language::kPharo, "Example", {596, 812, 152, 205}},
    {Language::kPharo, "Intent", {173, 1236, 45, 311}},
    {Language::kPharo, "Keyimpl", {184, 1222, 48, 311}},
    {Language::kPharo, "Keymsg", {242, 1165, 63, 295}},
    {Language::kPharo, "Resp", {267, 1139, 69, 290}},
    {Language::kPython, "Devnotes", {247, 1792, 65, 451}},
    {Language::kPython, "Expand", {402, 1637, 102, 414}},
    {Language::kPython, "Parameters", {633, 1404, 161, 357}},
    {Language::kPython, "Summary", {361, 1678, 93, 423}},
    {Language::kPython, "Usage", {637, 1401, 163, 354}},
}};

// Long or abbreviated spellings seen in reports and dataset files.
const std::unordered_map<std::string, std::string_view>& name_aliases() {
  static const std::unordered_map<std::string, std::string_view> aliases{
      {"collab", "Collaborators"},
      {"classreferences", "Classref"},
      {"classreference", "Classref"},
      {"keymessages", "Keymsg"},
      {"keyimplementationpoints", "Keyimpl"},
      {"responsibilities", "Resp"},
      {"developmentnotes", "Devnotes"},
      {"rationale", "Rational"},
      {"depreciation", "Deprecation"},
  };
  return aliases;
}

std::string canonical_name(Language language, std::string_view name) {
  const std::string key = lower_alnum(name);
  for (const auto& row : kReferenceRows) {
    if (row.language == language && lower_alnum(row.name) == key) return std::string(row.name);
  }
  if (auto it = name_aliases().find(key); it != name_aliases().end()) {
    for (const auto& row : kReferenceRows) {
      if (row.language == language && row.name == it->second) return std::string(row.name);
    }
  }
  return std::string(trim(name));
}

Partition parse_partition(std::string_view raw, std::size_t row) {
  const std::string value = lower(trim(raw));
  // The competition files encode the split as 0 (train) / 1 (test).
  if (value == "train" || value == "0") return Partition::kTrain;
  if (value == "test" || value == "1") return Partition::kTest;
  fail(ErrorCode::kBadPartition,
       "row " + std::to_string(row) + ": partition '" + std::string(raw) + "' is not train/test");
}

int parse_label(std::string_view raw, std::size_t row) {
  const auto value = trim(raw);
  if (value == "0") return 0;
  if (value == "1") return 1;
  fail(ErrorCode::kBadLabel,
       "row " + std::to_string(row) + ": instance type '" + std::string(raw) + "' is not 0/1");
}

std::int64_t parse_id(std::string_view raw, std::size_t row) {
  const auto value = std::string(trim(raw));
  try {
    std::size_t used = 0;
    const auto id = std::stoll(value, &used);
    if (used == value.size()) return id;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kMalformedCsv,
       "row " + std::to_string(row) + ": id '" + value + "' is not an integer");
}

struct ParsedRow {
  CommentSample sample;
  std::string raw_category;
};

struct ParsedFile {
  std::vector<ParsedRow> rows;
  std::vector<LoadWarning> warnings;
};

ParsedFile parse_file(const std::filesystem::path& path, Language language,
                      const ColumnMap& columns) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) fail(ErrorCode::kEmptyFile, path.string() + " has no header row");

  const auto& header = rows.front();
  std::array<std::size_t, 6> index{};
  const auto names = ColumnMap::canonical_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string wanted = columns.header_for(names[c]);
    const auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
      return trim(h) == wanted;
    });
    if (it == header.end()) {
      fail(ErrorCode::kMissingColumn, path.string() + ": no column named '" + wanted + "'");
    }
    index[c] = static_cast<std::size_t>(it - header.begin());
  }
  if (rows.size() == 1) fail(ErrorCode::kEmptyFile, path.string() + " has no data rows");

  ParsedFile parsed;
  std::unordered_map<std::int64_t, std::size_t> seen_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < header.size()) {
      fail(ErrorCode::kMalformedCsv, path.string() + ": row " + std::to_string(r) + " has " +
                                         std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(header.size()));
    }
    ParsedRow out;
    auto& s = out.sample;
    s.id = parse_id(row[index[0]], r);
    s.text = row[index[1]];
    while (!s.text.empty() && (s.text.back() == '\n' || s.text.back() == '\r')) s.text.pop_back();
    s.class_file = row[index[2]];
    s.partition = parse_partition(row[index[3]], r);
    out.raw_category = row[index[4]];
    s.category = make_category(language, out.raw_category);
    s.label = parse_label(row[index[5]], r);
    if (auto [it, inserted] = seen_ids.emplace(s.id, r); !inserted) {
      parsed.warnings.push_back(
          {r, "duplicate id " + std::to_string(s.id) + " (first seen at row " +
                  std::to_string(it->second) + ")"});
    }
    parsed.rows.push_back(std::move(out));
  }
  return parsed;
}

}  // namespace

std::string_view to_string(Language language) noexcept {
  switch (language) {
    case Language::kJava: return "Java";
    case Language::kPharo: return "Pharo";
    case Language::kPython: return "Python";
  }
  return "?";
}

std::optional<Language> parse_language(std::string_view text) {
  const auto key = lower_alnum(text);
  if (key == "java") return Language::kJava;
  if (key == "pharo") return Language::kPharo;
  if (key == "python") return Language::kPython;
  return std::nullopt;
}

std::string CategoryId::str() const { return std::string(to_string(language)) + "/" + name; }

CategoryId make_category(Language language, std::string_view name) {
  return CategoryId{language, canonical_name(language, name)};
}

CategoryId parse_category(std::string_view text) {
  const auto sep = text.find_first_of("/:_");
  if (sep == std::string_view::npos) {
    fail(ErrorCode::kUnknownCategory, "expected <language>/<name>, got '" + std::string(text) + "'");
  }
  const auto language = parse_language(text.substr(0, sep));
  if (!language) {
    fail(ErrorCode::kUnknownCategory, "unknown language in '" + std::string(text) + "'");
  }
  const auto name = trim(text.substr(sep + 1));
  if (name.empty()) fail(ErrorCode::kUnknownCategory, "empty category name in '" + std::string(text) + "'");
  return make_category(*language, name);
}

std::span<const CategoryId> reference_categories() {
  static const std::vector<CategoryId> categories = [] {
    std::vector<CategoryId> out;
    for (const auto& row : kReferenceRows) out.push_back({row.language, std::string(row.name)});
    std::sort(out.begin(), out.end());
    return out;
  }();
  return categories;
}

bool is_reference_category(const CategoryId& category) {
  return reference_counts(category).has_value();
}

std::optional<SplitCounts> reference_counts(const CategoryId& category) {
  for (const auto& row : kReferenceRows) {
    if (row.language == category.language && row.name == category.name) return row.counts;
  }
  return std::nullopt;
}

CategoryDataset CategoryDataset::from_samples(CategoryId category,
                                              std::vector<CommentSample> samples,
                                              std::vector<LoadWarning> warnings) {
  CategoryDataset ds;
  ds.category_ = std::move(category);
  ds.warnings_ = std::move(warnings);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& s = samples[i];
    if (s.category != ds.category_) {
      fail(ErrorCode::kCategoryMismatch, "sample " + std::to_string(s.id) + " belongs to " +
                                             s.category.str() + ", dataset is " +
                                             ds.category_.str());
    }
    if (s.label != 0 && s.label != 1) {
      fail(ErrorCode::kBadLabel, "sample " + std::to_string(s.id) + " has label " +
                                     std::to_string(s.label));
    }
    if (trim(s.text).empty()) {
      fail(ErrorCode::kMalformedCsv, "sample " + std::to_string(s.id) + " has an empty sentence");
    }
    const bool pos = s.label == 1;
    if (s.partition == Partition::kTrain) {
      ++(pos ? ds.counts_.train_pos : ds.counts_.train_neg);
      ds.train_.push_back(std::move(s));
    } else {
      ++(pos ? ds.counts_.test_pos : ds.counts_.test_neg);
      ds.test_.push_back(std::move(s));
    }
  }
  return ds;
}

std::string_view to_string(FormattingVariant variant) noexcept {
  return variant == FormattingVariant::kWithClassname ? "with_classname" : "sentence_only";
}

std::optional<FormattingVariant> parse_variant(std::string_view text) {
  const auto key = lower(trim(text));
  if (key == "with_classname" || key == "main") return FormattingVariant::kWithClassname;
  if (key == "sentence_only" || key == "v1") return FormattingVariant::kSentenceOnly;
  return std::nullopt;
}

std::string format_input(std::string_view text, std::string_view class_file,
                         FormattingVariant variant) {
  if (variant == FormattingVariant::kSentenceOnly) return std::string(text);
  std::string out;
  out.reserve(text.size() + class_file.size() + 3);
  out.append(text).append(" | ").append(class_file);
  return out;
}

std::string format_input(const CommentSample& sample, FormattingVariant variant) {
  return format_input(sample.text, sample.class_file, variant);
}

std::span<const std::string_view> ColumnMap::canonical_names() {
  static constexpr std::array<std::string_view, 6> names{kId, kText, kClass,
                                                         kPartition, kCategory, kLabel};
  return names;
}

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap map;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const auto item = trim(spec.substr(0, comma));
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kInvalidArgument, "column alias '" + std::string(item) + "' is not canonical=header");
    }
    map.set(trim(item.substr(0, eq)), std::string(trim(item.substr(eq + 1))));
  }
  return map;
}

void ColumnMap::set(std::string_view canonical, std::string header) {
  const auto names = canonical_names();
  if (std::find(names.begin(), names.end(), canonical) == names.end()) {
    fail(ErrorCode::kInvalidArgument, "unknown canonical column '" + std::string(canonical) + "'");
  }
  aliases_[std::string(canonical)] = std::move(header);
}

std::string ColumnMap::header_for(std::string_view canonical) const {
  if (auto it = aliases_.find(canonical); it != aliases_.end()) return it->second;
  return std::string(canonical);
}

CategoryDataset load_category(const std::filesystem::path& path, const CategoryId& category,
                              const ColumnMap& columns) {
  auto parsed = parse_file(path, category.language, columns);
  std::vector<CommentSample> samples;
  samples.reserve(parsed.rows.size());
  for (std::size_t r = 0; r < parsed.rows.size(); ++r) {
    auto& row = parsed.rows[r];
    if (row.sample.category != category) {
      fail(ErrorCode::kCategoryMismatch, path.string() + ": row " + std::to_string(r + 1) +
                                             " has category '" + row.raw_category +
                                             "', expected " + category.str());
    }
    samples.push_back(std::move(row.sample));
  }
  return CategoryDataset::from_samples(category, std::move(samples), std::move(parsed.warnings));
}

std::vector<CategoryDataset> load_language_file(const std::filesystem::path& path,
                                                Language language, const ColumnMap& columns) {
  auto parsed = parse_file(path, language, columns);
  std::map<CategoryId, std::vector<CommentSample>> groups;
  for (auto& row : parsed.rows) groups[row.sample.category].push_back(std::move(row.sample));
  std::vector<CategoryDataset> out;
  for (auto& [category, samples] : groups) {
    // Duplicate ids are expected across categories of a combined file; only
    // within-category duplicates are worth a warning, so recompute here.
    std::vector<LoadWarning> warnings;
    std::unordered_map<std::int64_t, std::size_t> seen;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!seen.emplace(samples[i].id, i + 1).second) {
        warnings.push_back({i + 1, "duplicate id " + std::to_string(samples[i].id)});
      }
    }
    out.push_back(CategoryDataset::from_samples(category, std::move(samples), std::move(warnings)));
  }
  return out;
}

std::vector<CategoryDataset> load_corpus(const std::filesystem::path& root,
                                         const ColumnMap& columns) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) fail(ErrorCode::kIo, root.string() + " is not a directory");

  std::vector<fs::path> language_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && parse_language(entry.path().filename().string())) {
      language_dirs.push_back(entry.path());
    }
  }
  std::sort(language_dirs.begin(), language_dirs.end());

  std::vector<CategoryDataset> out;
  for (const auto& dir : language_dirs) {
    const Language language = *parse_language(dir.filename().string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && lower(entry.path().extension().string()) == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      const auto stem = file.stem().string();
      if (parse_language(stem) == language) {
        for (auto& ds : load_language_file(file, language, columns)) out.push_back(std::move(ds));
      } else {
        out.push_back(load_category(file, make_category(language, stem), columns));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.category() < b.category();
  });
  return out;
}

void save_category(const CategoryDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  csv::Row header;
  for (auto name : ColumnMap::canonical_names()) header.emplace_back(name);
  csv::write_row(out, header);
  auto write = [&](const CommentSample& s) {
    csv::write_row(out, {std::to_string(s.id), s.text, s.class_file,
                         s.partition == Partition::kTrain ? "train" : "test",
                         s.category.name, std::to_string(s.label)});
  };
  for (const auto& s : dataset.train()) write(s);
  for (const auto& s : dataset.test()) write(s);
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<Discrepancy> validate_against_reference(std::span<const CategoryDataset> datasets) {
  std::vector<Discrepancy> out;
  for (const auto& ds : datasets) {
    const auto expected = reference_counts(ds.category());
    if (!expected) {
      out.push_back({DiscrepancyKind::kUnknownCategory, ds.category(), "", 0, 0});
      continue;
    }
    const auto& got = ds.counts();
    const std::array<std::tuple<const char*, std::int64_t, std::int64_t>, 4> fields{{
        {"train_pos", expected->train_pos, got.train_pos},
        {"train_neg", expected->train_neg, got.train_neg},
        {"test_pos", expected->test_pos, got.test_pos},
        {"test_neg", expected->test_neg, got.test_neg},
    }};
    for (const auto& [field, want, have] : fields) {
      if (want != have) out.push_back({DiscrepancyKind::kCountMismatch, ds.category(), field, want, have});
    }
  }
  return out;
}

}  // namespace cclf
