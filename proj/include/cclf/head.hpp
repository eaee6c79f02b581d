#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include "cclf/embedder.hpp"

namespace cclf {

enum class HeadSolver { kNewtonCg, kLbfgs, kLiblinear };

std::string_view to_string(HeadSolver solver) noexcept;
std::optional<HeadSolver> parse_solver(std::string_view text);

struct HeadConfig {
  int max_iterations = 100;
  HeadSolver solver = HeadSolver::kLiblinear;
  // Penalty on (1/2)||w||^2 added to the mean cross-entropy. When unset it
  // resolves to 1/n, which is the C = 1 inverse-regularisation convention.
  std::optional<double> l2_strength;
  double tolerance = 1.0e-4;
};

// Logistic head p(y = 1 | x) = sigmoid(w.x + b) plus a record of the fit.
struct HeadModel {
  Eigen::VectorXd weights;
  double bias = 0.0;

  HeadSolver solver = HeadSolver::kLiblinear;
  int max_iterations = 0;
  double l2_strength = 0.0;  // resolved value
  double tolerance = 0.0;
  bool converged = false;    // gradient norm reached tolerance
  int iterations = 0;        // outer solver iterations performed
};

struct ObjectiveEval {
  double value = 0.0;
  Eigen::VectorXd gradient;  // [d weight partials..., bias partial]
};

// Mean binary cross-entropy + (l2/2)||w||^2 at parameters [w; b]. The
// intercept is not penalised.
ObjectiveEval head_objective(std::span<const EmbeddingVector> embeddings, std::span<const int> labels,
                             double l2_strength, const Eigen::VectorXd& params);

// Throws SingleClassLabels, NonFiniteObjective, LengthMismatch.
HeadModel train_head(std::span<const EmbeddingVector> embeddings, std::span<const int> labels,
                     const HeadConfig& config);

double predict_proba(const HeadModel& model, const EmbeddingVector& embedding);

// 1 iff predict_proba >= threshold; threshold must lie in (0, 1).
int predict(const HeadModel& model, const EmbeddingVector& embedding, double threshold = 0.5);

// Text format, one key per line:
//   head 1
//   dimension <d>
//   weights <w_1> ... <w_d>
//   bias <b>
//   solver <name>
//   max_iterations <k>
//   l2_strength <x>
//   tolerance <x>
//   converged <0|1>
//   iterations <k>
void save_head(const HeadModel& model, std::ostream& out);
HeadModel load_head(std::istream& in);

}  // namespace cclf
