#include "cclf/orchestrator.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "cclf/error.hpp"
#include "cclf/pairgen.hpp"
#include "cclf/textio.hpp"

namespace cclf {
namespace {

// Stream tags for derive_seed().
constexpr std::uint64_t kPairStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kSubsampleStream = 3;
constexpr std::uint64_t kSearchStream = 4;
constexpr std::uint64_t kHoldoutStream = 5;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> formatted_inputs(std::span<const CommentSample> samples, FormattingVariant v) {
  std::vector<std::string> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(format_input(s, v));
  return out;
}

}  // namespace

Hyperparams tuned_hyperparams() { return {1.71e-5, 6, 241, HeadSolver::kLbfgs}; }
Hyperparams base_hyperparams() { return {2.0e-5, 5, 100, HeadSolver::kLiblinear}; }

void SearchSpace::check(const Hyperparams& hp) const {
  auto reject = [](const std::string& what) { fail(ErrorCode::kBoundsError, what); };
  if (!(hp.learning_rate > learning_rate_min && hp.learning_rate < learning_rate_max)) {
    reject("learning rate " + format_double(hp.learning_rate) + " outside (" +
           format_double(learning_rate_min) + ", " + format_double(learning_rate_max) + ")");
  }
  if (hp.epochs < epochs_min || hp.epochs > epochs_max) {
    reject("epochs " + std::to_string(hp.epochs) + " outside [" + std::to_string(epochs_min) + ", " +
           std::to_string(epochs_max) + "]");
  }
  if (hp.head_max_iterations < head_iterations_min || hp.head_max_iterations > head_iterations_max) {
    reject("head iterations " + std::to_string(hp.head_max_iterations) + " outside [" +
           std::to_string(head_iterations_min) + ", " + std::to_string(head_iterations_max) + "]");
  }
  if (std::find(solvers.begin(), solvers.end(), hp.solver) == solvers.end()) {
    reject("solver " + std::string(to_string(hp.solver)) + " not in the search space");
  }
}

Hyperparams SearchSpace::sample(Rng& rng) const {
  if (solvers.empty()) fail(ErrorCode::kInvalidArgument, "search space has no solvers");
  Hyperparams hp;
  const double lo = std::log(learning_rate_min);
  const double hi = std::log(learning_rate_max);
  // unit() is in [0, 1); redraw the lower endpoint to keep the interval open.
  do {
    hp.learning_rate = std::exp(rng.uniform(lo, hi));
  } while (!(hp.learning_rate > learning_rate_min && hp.learning_rate < learning_rate_max));
  hp.epochs = static_cast<int>(rng.integer(epochs_min, epochs_max));
  hp.head_max_iterations = static_cast<int>(rng.integer(head_iterations_min, head_iterations_max));
  hp.solver = solvers[rng.index(solvers.size())];
  return hp;
}

double ClassifierArtifact::probability(const std::string& input) const {
  return predict_proba(head, backend->encode_one(input));
}

std::vector<double> ClassifierArtifact::probabilities(std::span<const std::string> inputs) const {
  const auto embeddings = backend->encode(inputs);
  std::vector<double> out;
  out.reserve(embeddings.size());
  for (const auto& e : embeddings) out.push_back(predict_proba(head, e));
  return out;
}

ClassifierArtifact train_category(const CategoryDataset& dataset, const EmbeddingBackend& backend,
                                  const Hyperparams& hp, const TrainOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto& counts = dataset.counts();
  if (counts.train_pos == 0 || counts.train_neg == 0) {
    fail(ErrorCode::kSingleClassInput,
         dataset.category().str() + ": train partition needs positive and negative samples");
  }

  const auto inputs = formatted_inputs(dataset.train(), options.variant);
  std::vector<LabeledText> labeled;
  std::vector<int> labels;
  labeled.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    labeled.push_back({inputs[i], dataset.train()[i].label});
    labels.push_back(dataset.train()[i].label);
  }
  const auto pairs =
      generate_pairs(labeled, {options.pair_iterations, derive_seed(options.seed, kPairStream)});

  ClassifierArtifact artifact;
  artifact.category = dataset.category();
  artifact.variant = options.variant;
  artifact.hyperparams = hp;
  artifact.backend = backend.clone();
  if (!pairs.empty()) {
    artifact.metadata.epoch_loss =
        artifact.backend
            ->fine_tune(pairs, {hp.learning_rate, hp.epochs, options.batch_size,
                                derive_seed(options.seed, kShuffleStream)})
            .epoch_loss;
  }

  const auto embeddings = artifact.backend->encode(inputs);
  HeadConfig head_config;
  head_config.max_iterations = hp.head_max_iterations;
  head_config.solver = hp.solver;
  head_config.l2_strength = options.l2_strength;
  head_config.tolerance = options.head_tolerance;
  artifact.head = train_head(embeddings, labels, head_config);

  auto& meta = artifact.metadata;
  meta.seed = options.seed;
  meta.pair_iterations = options.pair_iterations;
  meta.batch_size = options.batch_size;
  meta.pair_count = pairs.size();
  meta.train_samples = inputs.size();
  meta.train_seconds = seconds_since(start);
  meta.created_at = utc_now();
  return artifact;
}

std::vector<ClassifierArtifact> train_categories(std::span<const CategoryDataset> datasets,
                                                 const EmbeddingBackend& backend, const Hyperparams& hp,
                                                 const TrainOptions& options, int max_parallel) {
  std::vector<ClassifierArtifact> out(datasets.size());
  std::vector<std::exception_ptr> errors(datasets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < datasets.size(); i = next++) {
      try {
        out[i] = train_category(datasets[i], backend, hp, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, max_parallel));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(threads, datasets.size()); ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Evaluation evaluate_artifact(const ClassifierArtifact& artifact, const CategoryDataset& dataset) {
  if (artifact.category != dataset.category()) {
    fail(ErrorCode::kCategoryMismatch, "artifact is for " + artifact.category.str() + ", dataset is " +
                                           dataset.category().str());
  }
  if (dataset.test().empty()) fail(ErrorCode::kInvalidArgument, dataset.category().str() + " has no test samples");
  const auto inputs = formatted_inputs(dataset.test(), artifact.variant);
  const auto probs = artifact.probabilities(inputs);
  std::vector<int> preds, labels;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    preds.push_back(probs[i] >= 0.5 ? 1 : 0);
    labels.push_back(dataset.test()[i].label);
  }
  Evaluation ev;
  ev.counts = confusion(preds, labels);
  ev.metrics = category_metrics(ev.counts);
  return ev;
}

CategoryDataset holdout_split(const CategoryDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) fail(ErrorCode::kInvalidArgument, "holdout fraction must be in (0, 1)");
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < dataset.train().size(); ++i) by_label[dataset.train()[i].label].push_back(i);

  std::vector<CommentSample> samples = dataset.train();
  Rng rng(seed);
  for (auto& idx : by_label) {
    if (idx.size() < 2) {
      fail(ErrorCode::kInsufficientSamples,
           dataset.category().str() + ": holdout split needs at least 2 samples per class");
    }
    rng.shuffle(idx.begin(), idx.end());
    auto take = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(idx.size())));
    take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
    for (std::size_t k = 0; k < take; ++k) samples[idx[k]].partition = Partition::kTest;
  }
  return CategoryDataset::from_samples(dataset.category(), std::move(samples));
}

std::vector<BenchmarkRow> few_shot_benchmark(std::span<const EmbeddingBackend* const> backends,
                                             const CategoryDataset& dataset,
                                             const BenchmarkOptions& options) {
  if (options.n_per_class < 1) fail(ErrorCode::kInvalidArgument, "n_per_class must be >= 1");
  const auto n = static_cast<std::size_t>(options.n_per_class);
  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < dataset.train().size(); ++i) by_label[dataset.train()[i].label].push_back(i);
  for (int label = 0; label < 2; ++label) {
    if (by_label[label].size() < n) {
      fail(ErrorCode::kInsufficientSamples,
           dataset.category().str() + ": " + std::to_string(by_label[label].size()) + " samples with label " +
               std::to_string(label) + ", " + std::to_string(n) + " requested");
    }
  }

  Rng rng(derive_seed(options.seed, kSubsampleStream));
  std::vector<CommentSample> subset;
  for (auto& idx : by_label) {
    rng.shuffle(idx.begin(), idx.end());
    std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(chosen.begin(), chosen.end());
    for (auto i : chosen) subset.push_back(dataset.train()[i]);
  }
  for (const auto& s : dataset.test()) subset.push_back(s);
  const auto few_shot = CategoryDataset::from_samples(dataset.category(), std::move(subset));

  Hyperparams hp = base_hyperparams();
  hp.epochs = options.epochs;
  TrainOptions train;
  train.variant = options.variant;
  train.seed = options.seed;
  train.pair_iterations = options.pair_iterations;
  train.batch_size = options.batch_size;

  std::vector<BenchmarkRow> rows;
  for (const auto* backend : backends) {
    const auto start = std::chrono::steady_clock::now();
    const auto artifact = train_category(few_shot, *backend, hp, train);
    const auto ev = evaluate_artifact(artifact, few_shot);
    rows.push_back({backend->backend_id(), ev.metrics.accuracy, ev.metrics.f1, seconds_since(start)});
  }
  return rows;
}

TuneResult tune_hyperparams(const CategoryDataset& dataset, const EmbeddingBackend& backend,
                            const SearchSpace& space, const TuneOptions& options) {
  if (options.trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  for (const auto& hp : options.enqueued) space.check(hp);

  const CategoryDataset holdout = options.use_test_split
                                      ? dataset
                                      : holdout_split(dataset, options.eval_fraction,
                                                      derive_seed(options.seed, kHoldoutStream));
  Rng rng(derive_seed(options.seed, kSearchStream));
  TuneResult result;
  for (int t = 0; t < options.trials; ++t) {
    const auto k = static_cast<std::size_t>(t);
    const Hyperparams hp = k < options.enqueued.size() ? options.enqueued[k] : space.sample(rng);
    const auto start = std::chrono::steady_clock::now();
    const auto artifact = train_category(holdout, backend, hp, options.train);
    const double f1 = evaluate_artifact(artifact, holdout).metrics.f1;
    result.history.push_back({t, hp, f1, seconds_since(start)});
    if (t == 0 || f1 > result.best_objective) {
      result.best = hp;
      result.best_objective = f1;
    }
  }
  return result;
}

}  // namespace cclf
