#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cclf/corpus.hpp"
#include "cclf/embedder.hpp"
#include "cclf/head.hpp"
#include "cclf/metrics.hpp"
#include "cclf/rng.hpp"

namespace cclf {

struct Hyperparams {
  double learning_rate = 1.71e-5;
  int epochs = 6;
  int head_max_iterations = 241;
  HeadSolver solver = HeadSolver::kLbfgs;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Result of the hyperparameter search on the hardest category; used as the
// default for every classifier.
Hyperparams tuned_hyperparams();
// Trainer defaults before tuning.
Hyperparams base_hyperparams();

struct SearchSpace {
  double learning_rate_min = 1e-6;  // open interval, sampled log-uniformly
  double learning_rate_max = 1e-4;
  int epochs_min = 1;
  int epochs_max = 10;
  int head_iterations_min = 50;
  int head_iterations_max = 300;
  std::vector<HeadSolver> solvers{HeadSolver::kNewtonCg, HeadSolver::kLbfgs, HeadSolver::kLiblinear};

  // Throws BoundsError when hp lies outside the space.
  void check(const Hyperparams& hp) const;
  Hyperparams sample(Rng& rng) const;
};

struct TrainOptions {
  FormattingVariant variant = FormattingVariant::kWithClassname;
  std::uint64_t seed = 0;
  int pair_iterations = 20;
  int batch_size = 16;
  std::optional<double> l2_strength;  // unset: C = 1 convention
  double head_tolerance = 1.0e-4;
};

struct TrainingMetadata {
  std::uint64_t seed = 0;
  int pair_iterations = 0;
  int batch_size = 0;
  std::size_t pair_count = 0;
  std::size_t train_samples = 0;
  std::vector<double> epoch_loss;
  double train_seconds = 0.0;
  std::string created_at;  // UTC, ISO 8601
};

// A trained per-category classifier: fine-tuned encoder plus logistic head.
struct ClassifierArtifact {
  CategoryId category;
  FormattingVariant variant = FormattingVariant::kWithClassname;
  std::unique_ptr<EmbeddingBackend> backend;
  HeadModel head;
  Hyperparams hyperparams;
  TrainingMetadata metadata;

  // `input` must already be formatted for `variant`.
  double probability(const std::string& input) const;
  std::vector<double> probabilities(std::span<const std::string> inputs) const;
};

// format_input -> generate_pairs -> fine_tune(clone of backend) -> encode
// train set -> train_head. The base backend is never modified.
ClassifierArtifact train_category(const CategoryDataset& dataset, const EmbeddingBackend& backend,
                                  const Hyperparams& hp, const TrainOptions& options);

// Trains each dataset on its own backend clone using up to max_parallel
// threads. Output order follows the input order.
std::vector<ClassifierArtifact> train_categories(std::span<const CategoryDataset> datasets,
                                                 const EmbeddingBackend& backend, const Hyperparams& hp,
                                                 const TrainOptions& options, int max_parallel);

struct Evaluation {
  CategoryMetrics metrics;
  ConfusionCounts counts;
};

// Scores the test partition. Throws CategoryMismatch.
Evaluation evaluate_artifact(const ClassifierArtifact& artifact, const CategoryDataset& dataset);

// Directory layout: manifest.json, head.txt, backend.txt.
void save_artifact(const ClassifierArtifact& artifact, const std::filesystem::path& dir);
ClassifierArtifact load_artifact(const std::filesystem::path& dir);
inline constexpr int kManifestVersion = 1;

struct BenchmarkOptions {
  int n_per_class = 32;
  int epochs = 5;
  std::uint64_t seed = 0;
  FormattingVariant variant = FormattingVariant::kWithClassname;
  int pair_iterations = 20;
  int batch_size = 16;
};

struct BenchmarkRow {
  std::string backend_id;
  double accuracy = 0.0;
  double f1 = 0.0;
  double wall_seconds = 0.0;  // train + evaluate
};

// Few-shot model selection: per backend, train on n_per_class seeded samples
// of each class with trainer defaults and score the full test partition.
// Throws InsufficientSamples.
std::vector<BenchmarkRow> few_shot_benchmark(std::span<const EmbeddingBackend* const> backends,
                                             const CategoryDataset& dataset,
                                             const BenchmarkOptions& options);

struct TrialRecord {
  int index = 0;
  Hyperparams hyperparams;
  double objective_f1 = 0.0;
  double wall_seconds = 0.0;
};

struct TuneOptions {
  int trials = 20;
  std::uint64_t seed = 0;
  // Score trials on the test partition instead of a held-out train slice.
  bool use_test_split = false;
  double eval_fraction = 0.2;
  // Evaluated first, before sampled trials; each is bounds-checked.
  std::vector<Hyperparams> enqueued;
  TrainOptions train;
};

struct TuneResult {
  Hyperparams best;
  double best_objective = 0.0;
  std::vector<TrialRecord> history;
};

// Seeded random search. best is the argmax of the objective, ties go to the
// earliest trial.
TuneResult tune_hyperparams(const CategoryDataset& dataset, const EmbeddingBackend& backend,
                            const SearchSpace& space, const TuneOptions& options);

// Re-partitions the train samples: a stratified `fraction` of each class
// becomes the test partition, the rest stays train. The original test
// partition is dropped. Each class keeps at least one sample on each side.
CategoryDataset holdout_split(const CategoryDataset& dataset, double fraction, std::uint64_t seed);

}  // namespace cclf
