#include <doctest.h>

#include <map>

#include "cclf/error.hpp"
#include "cclf/pairgen.hpp"
#include "cclf/rng.hpp"

using namespace cclf;

namespace {

std::vector<LabeledText> random_samples(Rng& rng, std::size_t n) {
  std::vector<LabeledText> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"s" + std::to_string(i), static_cast<int>(rng.index(2))});
  // Both labels present.
  out[0].label = 1;
  out[1].label = 0;
  return out;
}

}  // namespace

TEST_CASE("four samples, one round") {
  const std::vector<LabeledText> s = {{"p1", 1}, {"p2", 1}, {"n1", 0}, {"n2", 0}};
  const auto pairs = generate_pairs(s, {1, 42});
  REQUIRE(pairs.size() == 8);
  int ones = 0;
  std::map<std::string, int> label{{"p1", 1}, {"p2", 1}, {"n1", 0}, {"n2", 0}};
  for (const auto& p : pairs) {
    ones += p.target == 1.0;
    CHECK((p.target == 1.0) == (label[p.text_a] == label[p.text_b]));
    // Two members per label: the same-label partner is never self.
    if (p.target == 1.0) CHECK(p.text_a != p.text_b);
  }
  CHECK(ones == 4);
}

TEST_CASE("zero rounds give no pairs") {
  const std::vector<LabeledText> s = {{"only", 1}};
  CHECK(generate_pairs(s, {0, 1}).empty());
}

TEST_CASE("a lone member pairs with itself") {
  const std::vector<LabeledText> s = {{"p", 1}, {"n", 0}};
  const auto pairs = generate_pairs(s, {3, 9});
  REQUIRE(pairs.size() == 12);
  for (const auto& p : pairs) {
    if (p.target == 1.0) CHECK(p.text_a == p.text_b);
    else CHECK(p.text_a != p.text_b);
  }
}

TEST_CASE("single-class input is rejected") {
  const std::vector<LabeledText> s = {{"a", 1}, {"b", 1}};
  try {
    generate_pairs(s, {1, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClassInput);
  }
}

TEST_CASE("pair-count law and determinism over random configurations") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + rng.index(40);
    const auto r = static_cast<int>(1 + rng.index(6));
    const auto samples = random_samples(rng, n);
    const PairGenConfig config{r, rng.next()};
    const auto pairs = generate_pairs(samples, config);
    REQUIRE(pairs.size() == 2 * static_cast<std::size_t>(r) * n);
    std::size_t ones = 0;
    for (const auto& p : pairs) ones += p.target == 1.0;
    CHECK(ones * 2 == pairs.size());
    CHECK(generate_pairs(samples, config) == pairs);
  }
}

TEST_CASE("different seeds give different pairs") {
  Rng rng(5);
  const auto samples = random_samples(rng, 12);
  int differing = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    differing += generate_pairs(samples, {2, seed}) != generate_pairs(samples, {2, seed + 1000});
  }
  CHECK(differing >= 19);
}

TEST_CASE("partners are drawn uniformly") {
  // One positive anchor among five positives; each of the four others should
  // be drawn about a quarter of the time.
  std::vector<LabeledText> s = {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}, {"x", 0}};
  const auto pairs = generate_pairs(s, {4000, 77});
  std::map<std::string, int> hits;
  int total = 0;
  for (const auto& p : pairs) {
    if (p.text_a == "a" && p.target == 1.0) {
      ++hits[p.text_b];
      ++total;
    }
  }
  CHECK(hits.count("a") == 0);
  for (const char* k : {"b", "c", "d", "e"}) CHECK(hits[k] / static_cast<double>(total) == doctest::Approx(0.25).epsilon(0.1));
}
