#include <doctest.h>

#include <fstream>
#include <set>

#include "cclf/csv.hpp"
#include "cclf/corpus.hpp"
#include "cclf/error.hpp"
#include "fixtures.hpp"

using namespace cclf;
using cclf::testing::TempDir;

namespace {

void write(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

constexpr const char* kHeader = "comment_sentence_id,comment_sentence,class,partition,category,instance_type\n";

}  // namespace

TEST_CASE("csv parser handles quoting, CRLF and BOM") {
  const auto rows = csv::parse("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",z\n\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"a", "b"});
  CHECK(rows[1] == csv::Row{"x, y", "say \"hi\""});
  CHECK(rows[2] == csv::Row{"multi\nline", "z"});
  CHECK(code_of([] { csv::parse("a,\"open\n"); }) == ErrorCode::kMalformedCsv);
}

TEST_CASE("csv escape round-trips through the parser") {
  for (const std::string field : {"plain", "with,comma", "with \"quote\"", "line\nbreak", ""}) {
    std::ostringstream out;
    csv::write_row(out, {field, "x"});
    const auto rows = csv::parse(out.str());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == field);
  }
}

TEST_CASE("category names") {
  CHECK(parse_category("Java/Ownership") == CategoryId{Language::kJava, "Ownership"});
  CHECK(parse_category("pharo:collab") == CategoryId{Language::kPharo, "Collaborators"});
  CHECK(parse_category("python_devnotes").str() == "Python/Devnotes");
  CHECK(make_category(Language::kPharo, "classreferences").name == "Classref");
  CHECK(reference_categories().size() == 19);
  CHECK(is_reference_category({Language::kJava, "Usage"}));
  CHECK_FALSE(is_reference_category({Language::kJava, "Keymsg"}));
}

TEST_CASE("hand-written four-row file") {
  TempDir dir("corpus");
  const auto path = dir.path() / "java" / "Ownership.csv";
  write(path, std::string(kHeader) +
                  "1,Written by a @author,A.java,train,Ownership,1\n"
                  "2,\"Also, by b @author\",B.java,train,Ownership,1\n"
                  "3,returns the sum,C.java,train,Ownership,0\n"
                  "4,\"by c @author\n\",D.java,test,Ownership,1\n");
  const auto ds = load_category(path, {Language::kJava, "Ownership"});
  CHECK(ds.counts() == SplitCounts{2, 1, 1, 0});
  CHECK(ds.train().size() == 3);
  CHECK(ds.train()[1].text == "Also, by b @author");
  CHECK(ds.test()[0].text == "by c @author");
  CHECK(ds.test()[0].class_file == "D.java");
}

TEST_CASE("load errors") {
  TempDir dir("corpus-errors");
  const CategoryId cat{Language::kJava, "Usage"};

  write(dir.path() / "empty.csv", kHeader);
  CHECK(code_of([&] { load_category(dir.path() / "empty.csv", cat); }) == ErrorCode::kEmptyFile);

  write(dir.path() / "nothing.csv", "");
  CHECK(code_of([&] { load_category(dir.path() / "nothing.csv", cat); }) == ErrorCode::kEmptyFile);

  write(dir.path() / "cols.csv", "id,text,class,partition,category\n1,a,A,train,Usage\n");
  CHECK(code_of([&] { load_category(dir.path() / "cols.csv", cat); }) == ErrorCode::kMissingColumn);

  write(dir.path() / "label.csv", std::string(kHeader) + "1,a,A.java,train,Usage,2\n");
  CHECK(code_of([&] { load_category(dir.path() / "label.csv", cat); }) == ErrorCode::kBadLabel);

  write(dir.path() / "part.csv", std::string(kHeader) + "1,a,A.java,validation,Usage,1\n");
  CHECK(code_of([&] { load_category(dir.path() / "part.csv", cat); }) == ErrorCode::kBadPartition);

  write(dir.path() / "other.csv", std::string(kHeader) + "1,a,A.java,train,Summary,1\n");
  CHECK(code_of([&] { load_category(dir.path() / "other.csv", cat); }) == ErrorCode::kCategoryMismatch);

  write(dir.path() / "blank.csv", std::string(kHeader) + "1,\"   \",A.java,train,Usage,1\n");
  CHECK(code_of([&] { load_category(dir.path() / "blank.csv", cat); }) == ErrorCode::kMalformedCsv);
}

TEST_CASE("duplicate ids are kept with a warning") {
  TempDir dir("corpus-dup");
  write(dir.path() / "d.csv", std::string(kHeader) + "7,a,A.java,train,Usage,1\n7,b,A.java,test,Usage,0\n");
  const auto ds = load_category(dir.path() / "d.csv", {Language::kJava, "Usage"});
  CHECK(ds.counts().total() == 2);
  REQUIRE(ds.warnings().size() == 1);
  CHECK(ds.warnings()[0].row == 2);
}

TEST_CASE("column aliases") {
  TempDir dir("corpus-alias");
  write(dir.path() / "a.csv", "id,sentence,file,split,cat,y\n1,hello,A.py,0,Usage,1\n2,bye,A.py,1,Usage,0\n");
  const auto columns = ColumnMap::parse(
      "comment_sentence_id=id,comment_sentence=sentence,class=file,partition=split,category=cat,instance_type=y");
  const auto ds = load_category(dir.path() / "a.csv", {Language::kPython, "Usage"}, columns);
  CHECK(ds.counts() == SplitCounts{1, 0, 0, 1});
  CHECK(code_of([] { ColumnMap::parse("nonsense=x"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("format_input") {
  CHECK(format_input("Method to calculate the SHA-256 checksum", "Checksum.java", FormattingVariant::kWithClassname) ==
        "Method to calculate the SHA-256 checksum | Checksum.java");
  CHECK(format_input("foo", "A.java", FormattingVariant::kSentenceOnly) == "foo");
  CHECK(format_input("a | b", "C.py", FormattingVariant::kWithClassname) == "a | b | C.py");
}

TEST_CASE("format_input is injective on pipe-free text") {
  Rng rng(3);
  const std::string alphabet = "ab c|";
  std::set<std::pair<std::string, std::string>> inputs;
  std::set<std::string> outputs;
  const std::vector<std::string> classes = {"A.java", "B.java", "a b.py"};
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    const auto len = rng.index(6);
    for (std::size_t k = 0; k < len; ++k) text += alphabet[rng.index(alphabet.size() - 1)];  // no pipe
    const auto& cls = classes[rng.index(classes.size())];
    if (inputs.emplace(text, cls).second) {
      CHECK(outputs.insert(format_input(text, cls, FormattingVariant::kWithClassname)).second);
    }
  }
}

TEST_CASE("save and reload preserves samples in order") {
  TempDir dir("corpus-roundtrip");
  auto ds = cclf::testing::separable_dataset(6, 3, 5);
  // Awkward text survives the trip.
  std::vector<CommentSample> samples(ds.train().begin(), ds.train().end());
  samples.insert(samples.end(), ds.test().begin(), ds.test().end());
  samples[0].text = "has, \"quotes\" and\nnewline";
  ds = CategoryDataset::from_samples(ds.category(), samples);

  const auto path = dir.path() / "java" / "Ownership.csv";
  std::filesystem::create_directories(path.parent_path());
  save_category(ds, path);
  const auto back = load_category(path, ds.category());
  CHECK(back.train() == ds.train());
  CHECK(back.test() == ds.test());
  CHECK(back.counts() == ds.counts());
}

TEST_CASE("counts agree with the lists") {
  const auto ds = cclf::testing::separable_dataset(9, 4, 1);
  const auto& c = ds.counts();
  CHECK(c.total() == static_cast<std::int64_t>(ds.train().size() + ds.test().size()));
  CHECK(c.train_pos == 9);
  CHECK(c.test_neg == 4);
  for (const auto& s : ds.train()) CHECK(s.category == ds.category());
}

TEST_CASE("corpus discovery and per-language files") {
  TempDir dir("corpus-discover");
  write(dir.path() / "java" / "Usage.csv", std::string(kHeader) + "1,a,A.java,train,Usage,1\n");
  write(dir.path() / "python" / "python.csv",
        std::string(kHeader) + "1,a,a.py,train,Summary,1\n2,b,b.py,test,Usage,0\n3,c,c.py,train,Summary,0\n");
  write(dir.path() / "notes" / "x.csv", "ignored\n");
  const auto all = load_corpus(dir.path());
  REQUIRE(all.size() == 3);
  CHECK(all[0].category().str() == "Java/Usage");
  CHECK(all[1].category().str() == "Python/Summary");
  CHECK(all[1].counts() == SplitCounts{1, 1, 0, 0});
  CHECK(all[2].category().str() == "Python/Usage");
}

TEST_CASE("validate_against_reference") {
  auto corpus = cclf::testing::reference_shaped_corpus();
  CHECK(validate_against_reference(corpus).empty());

  SUBCASE("one train positive removed from Java/Expand") {
    for (auto& ds : corpus) {
      if (ds.category().str() != "Java/Expand") continue;
      std::vector<CommentSample> samples(ds.train().begin(), ds.train().end());
      samples.insert(samples.end(), ds.test().begin(), ds.test().end());
      samples.erase(std::find_if(samples.begin(), samples.end(), [](const auto& s) { return s.label == 1; }));
      ds = CategoryDataset::from_samples(ds.category(), samples);
    }
    const auto found = validate_against_reference(corpus);
    REQUIRE(found.size() == 1);
    CHECK(found[0].kind == DiscrepancyKind::kCountMismatch);
    CHECK(found[0].field == "train_pos");
    CHECK(found[0].expected == 505);
    CHECK(found[0].actual == 504);
  }

  SUBCASE("unknown category") {
    const auto extra = cclf::testing::separable_dataset(2, 1, 1, {Language::kPython, "Trivia"});
    const std::vector<CategoryDataset> one{extra};
    const auto found = validate_against_reference(one);
    REQUIRE(found.size() == 1);
    CHECK(found[0].kind == DiscrepancyKind::kUnknownCategory);
  }
}

TEST_CASE("Java/Expand counts from the reference table") {
  const auto counts = reference_counts({Language::kJava, "Expand"});
  REQUIRE(counts);
  CHECK(*counts == SplitCounts{505, 1426, 127, 360});
  CHECK(counts->total() == 2418);
}
