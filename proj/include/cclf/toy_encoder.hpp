#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cclf/embedder.hpp"

namespace cclf {

// Desk-scale encoder: a hashed bag-of-tokens count vector multiplied by a
// trainable square matrix initialised to identity plus seeded uniform noise.
// Trained with plain mini-batch gradient descent on the exact gradient.
class ToyHashEncoder final : public EmbeddingBackend {
 public:
  static constexpr std::string_view kBackendId = "toy-hash-encoder";
  static constexpr double kInitNoise = 0.01;

  ToyHashEncoder(std::size_t dimension, std::uint64_t seed);

  std::string backend_id() const override { return std::string(kBackendId); }
  std::size_t dimension() const override { return static_cast<std::size_t>(weights_.rows()); }

  std::vector<EmbeddingVector> encode(std::span<const std::string> texts) const override;
  TrainingLog fine_tune(std::span<const SentencePair> pairs, const FineTuneConfig& config) override;
  std::unique_ptr<EmbeddingBackend> clone() const override;

  // Text format:
  //   toy-hash-encoder 1
  //   dimension <d>
  //   seed <s>
  //   <d lines of d space-separated shortest round-trip doubles>
  void save_state(std::ostream& out) const override;
  static std::unique_ptr<ToyHashEncoder> load_state(std::istream& in);

  const Eigen::MatrixXd& weights() const { return weights_; }
  void set_weights(Eigen::MatrixXd weights);

  // Lowercased runs of [a-z0-9_@]; everything else separates tokens.
  static std::vector<std::string> tokenize(std::string_view text);
  static std::uint64_t fnv1a(std::string_view token);
  Eigen::VectorXd features(std::string_view text) const;

  // Loss (target - cos(W a, W b))^2 for one pair of feature vectors, and its
  // exact gradient with respect to W.
  static double pair_loss(const Eigen::MatrixXd& weights, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b, double target);
  static Eigen::MatrixXd pair_gradient(const Eigen::MatrixXd& weights, const Eigen::VectorXd& a,
                                       const Eigen::VectorXd& b, double target);

 private:
  ToyHashEncoder(Eigen::MatrixXd weights, std::uint64_t seed);

  Eigen::MatrixXd weights_;
  std::uint64_t seed_;
};

}  // namespace cclf
