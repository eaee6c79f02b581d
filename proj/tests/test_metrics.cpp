#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cclf/error.hpp"
#include "cclf/metrics.hpp"
#include "cclf/report.hpp"
#include "cclf/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cclf;
using cclf::testing::brute_force_metrics;

namespace {

std::map<CategoryId, double> published_f1() {
  std::map<CategoryId, double> out;
  for (const auto& row : cclf::testing::read_reference_rows(cclf::testing::reference_dir() / "published_results.csv")) {
    out[row.category] = row.f1;
  }
  return out;
}

CategoryResult result_of(const CategoryId& c, double p, double r, double f1) {
  CategoryResult out;
  out.category = c;
  out.metrics = {p, r, f1, 0.0, std::nan("")};
  return out;
}

}  // namespace

TEST_CASE("confusion examples") {
  const std::vector<int> p = {1, 0, 1, 0}, y = {1, 0, 0, 1};
  CHECK(confusion(p, y) == ConfusionCounts{1, 1, 1, 1});
  const std::vector<int> ones(5, 1);
  CHECK(confusion(ones, ones) == ConfusionCounts{5, 0, 0, 0});
  const std::vector<int> shorter = {1};
  CHECK_THROWS_AS(confusion(ones, shorter), Error);
  CHECK_THROWS_AS(confusion({}, {}), Error);
}

TEST_CASE("metrics agree with a brute-force oracle on random vectors") {
  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.index(500);
    const double bias = rng.unit();
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.unit() < bias;
      truth[i] = rng.unit() < 0.3;
    }
    const auto c = confusion(pred, truth);
    const auto m = category_metrics(c);
    const auto o = brute_force_metrics(pred, truth);
    REQUIRE(c == ConfusionCounts{o.tp, o.fp, o.tn, o.fn});
    CHECK(std::abs(m.precision - o.precision) <= 1e-12);
    CHECK(std::abs(m.recall - o.recall) <= 1e-12);
    CHECK(std::abs(m.f1 - o.f1) <= 1e-12);
    CHECK(std::abs(m.weighted_f1 - o.weighted_f1) <= 1e-12);
    CHECK(std::abs(m.accuracy - o.accuracy) <= 1e-12);
    // Literal identities.
    CHECK(std::abs(m.f1 * (m.precision + m.recall) - 2 * m.precision * m.recall) <= 1e-12);
    for (double v : {m.precision, m.recall, m.f1, m.weighted_f1, m.accuracy}) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("category_metrics examples") {
  const auto own = category_metrics({17, 0, 464, 8});
  CHECK(own.precision == 1.0);
  CHECK(own.recall == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(own.f1 == doctest::Approx(2 * 0.68 / 1.68));
  CHECK(std::abs(own.f1 - 0.81) < 0.005);

  const auto none = category_metrics({0, 0, 460, 27});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);

  const auto perfect = category_metrics({9, 0, 30, 0});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.weighted_f1 == 1.0);
  CHECK(perfect.accuracy == 1.0);
}

TEST_CASE("baseline table") {
  const auto& base = competition_baseline();
  CHECK(base.size() == 19);
  for (const auto& c : reference_categories()) CHECK(base.contains(c));
  CHECK(base.at({Language::kJava, "Ownership"}).recall == 0.68);
}

TEST_CASE("published F1 column gives the reported submission score") {
  const auto s = submission_score(published_f1(), competition_baseline());
  CHECK(std::abs(s.mean_f1 - 0.74) <= 0.005);
  CHECK(s.outperformed_fraction == 1.0);
  CHECK(std::abs(s.score - 0.81) <= 0.005);
}

TEST_CASE("submission score edge cases") {
  const auto& base = competition_baseline();
  std::map<CategoryId, double> zero, equal;
  for (const auto& [c, row] : base) {
    zero[c] = 0.0;
    equal[c] = row.f1;
  }
  const auto z = submission_score(zero, base);
  CHECK(z.score == 0.0);
  CHECK(z.outperformed_fraction == 0.0);

  const auto e = submission_score(equal, base);
  CHECK(e.outperformed_fraction == 0.0);
  CHECK(e.score == doctest::Approx(e.mean_f1 * 0.75));

  auto missing = equal;
  missing.erase(missing.begin());
  try {
    submission_score(missing, base);
    FAIL("expected MissingCategory");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kMissingCategory);
  }
}

TEST_CASE("submission score is monotone in every category") {
  Rng rng(4);
  const auto& base = competition_baseline();
  for (int trial = 0; trial < 200; ++trial) {
    std::map<CategoryId, double> f1;
    for (const auto& [c, row] : base) f1[c] = rng.unit();
    const double before = submission_score(f1, base).score;
    auto it = f1.begin();
    std::advance(it, rng.index(f1.size()));
    it->second = std::min(1.0, it->second + rng.unit() * 0.5);
    CHECK(submission_score(f1, base).score >= before);
  }
}

TEST_CASE("report over the published rows") {
  std::vector<CategoryResult> results;
  for (const auto& row : cclf::testing::read_reference_rows(cclf::testing::reference_dir() / "published_results.csv")) {
    results.push_back(result_of(row.category, row.precision, row.recall, row.f1));
    results.back().metrics.weighted_f1 = row.weighted_f1;
  }
  const auto report = build_report(results, competition_baseline());
  REQUIRE(report.rows.size() == 19);
  CHECK(std::abs(report.averages.precision - 0.71) <= 0.005);
  CHECK(std::abs(report.averages.recall - 0.79) <= 0.005);
  CHECK(std::abs(report.averages.f1 - 0.74) <= 0.005);
  CHECK(std::abs(report.averages.weighted_f1 - 0.92) <= 0.005);
  REQUIRE(report.submission);
  CHECK(std::abs(report.submission->score - 0.81) <= 0.005);

  const auto& dep = *std::find_if(report.rows.begin(), report.rows.end(), [](const ReportRow& r) {
    return r.result.category.str() == "Java/Deprecation";
  });
  CHECK(*dep.delta_f1 == doctest::Approx(0.86));

  SUBCASE("order does not matter") {
    auto shuffled = results;
    Rng rng(2);
    rng.shuffle(shuffled.begin(), shuffled.end());
    const auto again = build_report(shuffled, competition_baseline());
    CHECK(again.averages.f1 == report.averages.f1);
    CHECK(again.submission->score == report.submission->score);
  }
}

TEST_CASE("partial reports carry no submission score") {
  const std::vector<CategoryResult> one = {result_of({Language::kJava, "Usage"}, 0.5, 0.5, 0.5)};
  const auto report = build_report(one, competition_baseline());
  CHECK(report.rows.size() == 1);
  CHECK_FALSE(report.submission);
  const std::vector<CategoryResult> dup = {one[0], one[0]};
  CHECK_THROWS_AS(build_report(dup, competition_baseline()), Error);
}

TEST_CASE("ablation delta") {
  const CategoryId a{Language::kJava, "Usage"}, b{Language::kPython, "Summary"};
  const std::vector<CategoryResult> with = {result_of(a, 0.8, 0.6, 0.7), result_of(b, 0.6, 0.4, 0.5)};
  const std::vector<CategoryResult> without = {result_of(a, 0.6, 0.6, 0.6), result_of(b, 0.4, 0.2, 0.4)};
  const auto rw = build_report(with, {});
  const auto ro = build_report(without, {});
  const auto d = ablation_delta(rw, ro);
  CHECK(d.precision == doctest::Approx(0.2));
  CHECK(d.recall == doctest::Approx(0.1));
  CHECK(d.f1 == doctest::Approx(0.1));

  const auto same = ablation_delta(rw, rw);
  CHECK(same.precision == 0.0);
  CHECK(same.recall == 0.0);
  CHECK(same.f1 == 0.0);

  const std::vector<CategoryResult> other = {result_of(a, 0.6, 0.6, 0.6)};
  CHECK_THROWS_AS(ablation_delta(rw, build_report(other, {})), Error);
}

TEST_CASE("report files") {
  cclf::testing::TempDir dir("report");
  std::vector<CategoryResult> results = {result_of({Language::kJava, "Usage"}, 0.5, 0.25, 1.0 / 3)};
  results.push_back({{Language::kPharo, "Intent"}, category_metrics({4, 1, 20, 2}), ConfusionCounts{4, 1, 20, 2}});
  const auto report = build_report(results, competition_baseline());

  std::ostringstream csv1, csv2;
  write_report_csv(report, csv1);
  write_report_csv(report, csv2);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().find("Average") != std::string::npos);

  const auto path = dir.path() / "r.csv";
  std::ofstream(path) << csv1.str();
  const auto back = read_results_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].category.str() == "Java/Usage");
  CHECK(back[0].metrics.f1 == results[0].metrics.f1);
  REQUIRE(back[1].counts);
  CHECK(*back[1].counts == ConfusionCounts{4, 1, 20, 2});

  const auto table = render_table(report);
  CHECK(table.find("Java") != std::string::npos);
  CHECK(table.find("0.33") != std::string::npos);
  const auto svg = render_f1_chart_svg(report);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);

  std::ofstream(dir.path() / "p.csv") << "label,prediction\n1,1\n0,1\n1,0\n0,0\n";
  CHECK(read_predictions_csv(dir.path() / "p.csv") == ConfusionCounts{1, 1, 1, 1});
}
