// Acceptance suite: one PASS/FAIL line per criterion.
//
//   cclf_acceptance                 run every criterion
//   cclf_acceptance --criterion N   run one (exit 0 pass, 1 fail, 77 blocked)
//
// Criterion 4 needs the official dataset; point CCLF_DATA_ROOT at a directory
// holding <language>/<category>.csv files. Without it the criterion reports
// BLOCKED and exits 77, which CTest records as skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cclf/corpus.hpp"
#include "cclf/error.hpp"
#include "cclf/head.hpp"
#include "cclf/metrics.hpp"
#include "cclf/orchestrator.hpp"
#include "cclf/pairgen.hpp"
#include "cclf/toy_encoder.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cclf;
namespace fs = std::filesystem;

namespace {

enum class Outcome { kPass, kFail, kBlocked };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)}; }

std::string describe(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Metric oracle equivalence.
Verdict metric_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240101);
  double worst = 0.0;
  int count_mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.index(500);
    const double rate = rng.unit();
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.unit() < rate;
      truth[i] = rng.unit() < 0.3;
    }
    const auto c = confusion(pred, truth);
    const auto m = category_metrics(c);
    const auto o = testing::brute_force_metrics(pred, truth);
    count_mismatches += !(c == ConfusionCounts{o.tp, o.fp, o.tn, o.fn});
    for (double d : {m.precision - o.precision, m.recall - o.recall, m.f1 - o.f1, m.weighted_f1 - o.weighted_f1,
                     m.accuracy - o.accuracy}) {
      worst = std::max(worst, std::abs(d));
    }
  }
  const double secs = seconds_since(t0);
  return verdict(count_mismatches == 0 && worst <= 1e-12 && secs < 5.0,
                 describe("1000 vectors, count mismatches %d, max metric diff %.3g (<= 1e-12), %.3f s (< 5 s)",
                     count_mismatches, worst, secs));
}

// 2. Published F1 column reproduces the average and submission score.
Verdict table_arithmetic() {
  std::map<CategoryId, double> f1;
  for (const auto& row : testing::read_reference_rows(testing::reference_dir() / "published_results.csv")) {
    f1[row.category] = row.f1;
  }
  const auto s = submission_score(f1, competition_baseline());
  const bool ok = f1.size() == 19 && std::abs(s.mean_f1 - 0.74) <= 0.005 && std::abs(s.score - 0.81) <= 0.005 &&
                  s.outperformed_fraction == 1.0;
  return verdict(ok, describe("mean F1 %.4f (0.74 +/- 0.005), score %.4f (0.81 +/- 0.005), outperformed %.3f (1.0)",
                         s.mean_f1, s.score, s.outperformed_fraction));
}

// 3. Java Ownership baseline row from reconstructed counts.
Verdict ownership_baseline() {
  const auto m = category_metrics({17, 0, 464, 8});
  const bool ok = std::abs(m.precision - 1.00) <= 0.005 && std::abs(m.recall - 0.68) <= 0.005 &&
                  std::abs(m.f1 - 0.81) <= 0.005;
  return verdict(ok, describe("tp 17 fn 8 fp 0 tn 464: P %.4f R %.4f F1 %.4f (1.00/0.68/0.81 +/- 0.005)", m.precision,
                         m.recall, m.f1));
}

// 4. Official CSVs reproduce every reference count; ingest exits 0.
Verdict ingestion_fidelity() {
  const char* root = std::getenv("CCLF_DATA_ROOT");
  if (root == nullptr || *root == '\0') {
    return {Outcome::kBlocked, "official dataset not available; set CCLF_DATA_ROOT to run"};
  }
  try {
    const auto corpus = load_corpus(root);
    const auto found = validate_against_reference(corpus);
    std::size_t reference = 0;
    for (const auto& ds : corpus) reference += is_reference_category(ds.category());
    const std::string command = std::string("\"") + CCLF_CLI_PATH + "\" ingest --data-root \"" + root + "\" > /dev/null";
    const int status = std::system(command.c_str());
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return verdict(reference == 19 && found.empty() && exit_code == 0,
                   describe("%zu reference categories loaded (19), %zu discrepancies (0), ingest exit %d (0)", reference,
                       found.size(), exit_code));
  } catch (const std::exception& e) {
    return {Outcome::kFail, e.what()};
  }
}

// 5. Pair-count law and seeded determinism.
Verdict pair_count_law() {
  Rng rng(5150);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + rng.index(60);
    const int r = static_cast<int>(1 + rng.index(8));
    std::vector<LabeledText> samples;
    for (std::size_t i = 0; i < n; ++i) samples.push_back({"t" + std::to_string(i), static_cast<int>(rng.index(2))});
    samples[0].label = 0;
    samples[1].label = 1;
    const PairGenConfig config{r, rng.next()};
    const auto pairs = generate_pairs(samples, config);
    std::size_t ones = 0;
    for (const auto& p : pairs) ones += p.target == 1.0;
    const bool ok = pairs.size() == 2 * static_cast<std::size_t>(r) * n && 2 * ones == pairs.size() &&
                    generate_pairs(samples, config) == pairs;
    violations += !ok;
  }
  return verdict(violations == 0, describe("200 (N, R) configurations, %d violations (0)", violations));
}

// 6. Head: grid-search oracle, separable data, gradient check.
Verdict head_correctness() {
  const std::vector<double> xs = {-2.0, -1.0, -0.5, 0.3, 1.2, 2.5};
  const std::vector<int> ys = {0, 0, 1, 0, 1, 1};
  const auto [ow, ob] = testing::grid_search_logistic_1d(xs, ys, 1.0);
  std::vector<EmbeddingVector> x1;
  for (double v : xs) x1.push_back(EmbeddingVector::Constant(1, v));
  double oracle_dist = 0.0;
  for (auto solver : {HeadSolver::kNewtonCg, HeadSolver::kLbfgs, HeadSolver::kLiblinear}) {
    const auto m = train_head(x1, ys, {300, solver, 1.0, 1e-10});
    oracle_dist = std::max(oracle_dist, std::hypot(m.weights(0) - ow, m.bias - ob));
  }

  Rng rng(606);
  std::vector<EmbeddingVector> x2;
  std::vector<int> y2;
  const Eigen::Vector2d normal = Eigen::Vector2d(1.0, 2.0).normalized();
  while (x2.size() < 100) {
    EmbeddingVector v(2);
    v << rng.uniform(-5, 5), rng.uniform(-5, 5);
    const double margin = normal.dot(v) - 0.2;
    if (std::abs(margin) < 1.0) continue;
    x2.push_back(v);
    y2.push_back(margin > 0);
  }
  const auto sep = train_head(x2, y2, {241, HeadSolver::kLbfgs, std::nullopt, 1e-4});
  int correct = 0;
  for (std::size_t i = 0; i < x2.size(); ++i) correct += predict(sep, x2[i]) == y2[i];
  const double accuracy = correct / 100.0;

  double worst_grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EmbeddingVector> x;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
      x.push_back(Eigen::Vector3d(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)));
      y.push_back(i % 2);
    }
    Eigen::VectorXd p(4);
    for (int k = 0; k < 4; ++k) p(k) = rng.uniform(-1, 1);
    const double l2 = rng.uniform(0.01, 1.0);
    const auto g = head_objective(x, y, l2, p).gradient;
    Eigen::VectorXd num(4);
    for (int k = 0; k < 4; ++k) {
      Eigen::VectorXd up = p, down = p;
      up(k) += 1e-6;
      down(k) -= 1e-6;
      num(k) = (head_objective(x, y, l2, up).value - head_objective(x, y, l2, down).value) / 2e-6;
    }
    worst_grad = std::max(worst_grad, (g - num).norm() / num.norm());
  }
  return verdict(oracle_dist <= 1e-4 && accuracy >= 0.99 && worst_grad < 1e-4,
                 describe("oracle distance %.2e (<= 1e-4), separable accuracy %.2f (>= 0.99), gradient rel. err %.2e (< 1e-4)",
                     oracle_dist, accuracy, worst_grad));
}

// 7. Toy encoder gradient check and lr = 0 no-op.
Verdict toy_gradient() {
  Rng rng(707);
  const ToyHashEncoder enc(12, 3);
  const char* words[] = {"alpha", "beta", "gamma", "delta", "@author", "returns", "x", "list"};
  auto text = [&] {
    std::string s;
    for (std::size_t i = 0, n = 1 + rng.index(4); i < n; ++i) s += std::string(words[rng.index(8)]) + " ";
    return s;
  };
  double worst = 0.0;
  int checked = 0;
  std::vector<SentencePair> pairs;
  while (checked < 24) {
    SentencePair pair{text(), text(), static_cast<double>(rng.index(2))};
    pairs.push_back(pair);
    const auto a = enc.features(pair.text_a), b = enc.features(pair.text_b);
    Eigen::MatrixXd w = enc.weights();
    for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] += rng.uniform(-0.3, 0.3);
    const auto g = ToyHashEncoder::pair_gradient(w, a, b, pair.target);
    if (g.cwiseAbs().maxCoeff() < 1e-8) continue;  // exact minimum, nothing to compare
    const auto num = testing::toy_numeric_gradient(w, a, b, pair.target);
    worst = std::max(worst, (g - num).cwiseAbs().maxCoeff() / num.cwiseAbs().maxCoeff());
    ++checked;
  }
  ToyHashEncoder frozen(12, 3);
  const auto before = frozen.encode_one("alpha @author list");
  frozen.fine_tune(pairs, {0.0, 3, 4, 1});
  const bool unchanged = frozen.encode_one("alpha @author list") == before && frozen.weights() == enc.weights();
  return verdict(worst < 1e-4 && unchanged,
                 describe("%d pairs, max rel. err %.2e (< 1e-4), lr 0 leaves encoder unchanged: %s", checked, worst,
                     unchanged ? "yes" : "no"));
}

// 8. Desk-scale end-to-end run and persistence round-trip.
Verdict end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ds = testing::separable_dataset();
  const ToyHashEncoder base(64, 1);
  TrainOptions opts;
  opts.seed = 8;
  const auto artifact = train_category(ds, base, tuned_hyperparams(), opts);
  const auto ev = evaluate_artifact(artifact, ds);
  const double secs = seconds_since(t0);

  testing::TempDir dir("acceptance");
  save_artifact(artifact, dir.path() / "model");
  const auto back = load_artifact(dir.path() / "model");
  std::vector<std::string> golden;
  for (const auto& s : ds.test()) golden.push_back(format_input(s, artifact.variant));
  golden.push_back("Written by J. Doe @author | A.java");
  golden.push_back("");
  const bool identical = back.probabilities(golden) == artifact.probabilities(golden);
  return verdict(ev.metrics.f1 == 1.0 && secs < 60.0 && identical,
                 describe("test F1 %.3f (1.0), %.2f s (< 60 s), reloaded predictions bit-identical: %s", ev.metrics.f1,
                     secs, identical ? "yes" : "no"));
}

// 9. Seeded 20-trial search is reproducible and returns the argmax.
Verdict tuner_contract() {
  Rng rng(909);
  const char* shared[] = {"the", "value", "list", "author", "returns", "class", "method", "see"};
  std::vector<CommentSample> samples;
  for (int i = 0; i < 100; ++i) {
    int label = i % 2;
    std::string text = label ? "written by" : "computes";
    for (int k = 0; k < 4; ++k) text += std::string(" ") + shared[rng.index(8)];
    if (rng.unit() < 0.2) label = 1 - label;
    samples.push_back({i, text, "K.java", i < 80 ? Partition::kTrain : Partition::kTest, {Language::kJava, "Usage"},
                       label});
  }
  const auto ds = CategoryDataset::from_samples({Language::kJava, "Usage"}, samples);
  const ToyHashEncoder base(16, 2);
  TuneOptions opts;
  opts.trials = 20;
  opts.seed = 99;
  opts.train.pair_iterations = 2;
  const auto a = tune_hyperparams(ds, base, {}, opts);
  const auto b = tune_hyperparams(ds, base, {}, opts);

  bool same = a.history.size() == 20 && b.history.size() == 20 && a.best == b.best;
  for (std::size_t i = 0; same && i < a.history.size(); ++i) {
    same = a.history[i].hyperparams == b.history[i].hyperparams &&
           a.history[i].objective_f1 == b.history[i].objective_f1;
  }
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < a.history.size(); ++i) {
    if (a.history[i].objective_f1 > a.history[argmax].objective_f1) argmax = i;
  }
  const bool is_argmax = a.best == a.history[argmax].hyperparams && a.best_objective == a.history[argmax].objective_f1;
  bool in_space = true;
  for (const auto& t : a.history) {
    try {
      SearchSpace{}.check(t.hyperparams);
    } catch (const Error&) {
      in_space = false;
    }
  }
  return verdict(same && is_argmax && in_space,
                 describe("20 trials, runs identical: %s, best = argmax (trial %zu, F1 %.4f): %s, all in space: %s",
                     same ? "yes" : "no", argmax, a.best_objective, is_argmax ? "yes" : "no", in_space ? "yes" : "no"));
}

// 10. The README states what is and is not reproduced at desk scale.
Verdict documentation() {
  std::ifstream in(fs::path(CCLF_SOURCE_DIR) / "README.md");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  const bool runbook = text.find("## Full-scale runbook") != std::string::npos;
  const bool statement = text.find("## What is not reproduced") != std::string::npos &&
                         text.find("0.74") != std::string::npos && text.find("0.31") != std::string::npos &&
                         text.find("0.12") != std::string::npos;
  return verdict(runbook && statement, describe("README runbook section: %s, non-reproducibility statement: %s",
                                           runbook ? "present" : "missing", statement ? "present" : "missing"));
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "metric oracle equivalence", metric_oracle},
      {2, "published table arithmetic", table_arithmetic},
      {3, "Java Ownership baseline consistency", ownership_baseline},
      {4, "ingestion fidelity", ingestion_fidelity},
      {5, "pair-count law", pair_count_law},
      {6, "head correctness", head_correctness},
      {7, "toy encoder gradient check", toy_gradient},
      {8, "end-to-end desk-scale run", end_to_end},
      {9, "tuner contract", tuner_contract},
      {10, "non-reproducibility statement", documentation},
  };
  return all;
}

Outcome run(const Criterion& c) {
  Verdict v;
  try {
    v = c.run();
  } catch (const std::exception& e) {
    v = {Outcome::kFail, std::string("exception: ") + e.what()};
  }
  const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "BLOCKED";
  std::printf("criterion %2d %-7s %s: %s\n", c.id, tag, c.name, v.detail.c_str());
  std::fflush(stdout);
  return v.outcome;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int id = std::atoi(argv[2]);
    for (const auto& c : criteria()) {
      if (c.id != id) continue;
      switch (run(c)) {
        case Outcome::kPass: return 0;
        case Outcome::kFail: return 1;
        case Outcome::kBlocked: return 77;
      }
    }
    std::fprintf(stderr, "unknown criterion %s\n", argv[2]);
    return 2;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  int failed = 0;
  for (const auto& c : criteria()) failed += run(c) == Outcome::kFail;
  return failed == 0 ? 0 : 1;
}
