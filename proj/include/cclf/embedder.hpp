#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cclf/pairgen.hpp"

namespace cclf {

using EmbeddingVector = Eigen::VectorXd;

struct FineTuneConfig {
  double learning_rate = 2.0e-5;
  int epochs = 1;
  int batch_size = 16;
  std::uint64_t seed = 0;
};

struct TrainingLog {
  // Mean cosine-regression loss over all pairs, measured after each epoch.
  std::vector<double> epoch_loss;
};

// Fine-tunable text encoder. encode() is const and safe to call concurrently on
// a frozen backend; fine_tune() needs exclusive access.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual std::string backend_id() const = 0;
  virtual std::size_t dimension() const = 0;

  virtual std::vector<EmbeddingVector> encode(std::span<const std::string> texts) const = 0;
  EmbeddingVector encode_one(std::string_view text) const;

  // Minimises mean (target - cos(encode(a), encode(b)))^2 over the pairs.
  // Pairs are visited in a per-epoch shuffle driven by config.seed. The log
  // has exactly config.epochs entries. Throws NonFiniteLoss on divergence.
  virtual TrainingLog fine_tune(std::span<const SentencePair> pairs, const FineTuneConfig& config) = 0;

  virtual std::unique_ptr<EmbeddingBackend> clone() const = 0;

  // Serialized trainable state; restored through BackendRegistry::restore.
  virtual void save_state(std::ostream& out) const = 0;
};

// cos(u, v), defined as 0 when either vector is zero.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Mean (target - cos)^2 over pairs, computed through encode().
double cosine_regression_loss(const EmbeddingBackend& backend, std::span<const SentencePair> pairs);

struct BackendOptions {
  std::size_t dimension = 64;
  std::uint64_t seed = 0;
};

// Backend factories keyed by backend_id. The toy encoder is built in; the
// pretrained sentence-transformer identifiers are registered as external
// backends that report BackendUnavailable until a runtime is plugged in with
// register_backend().
class BackendRegistry {
 public:
  using Factory = std::function<std::unique_ptr<EmbeddingBackend>(const BackendOptions&)>;
  using Restorer = std::function<std::unique_ptr<EmbeddingBackend>(std::istream&)>;

  static BackendRegistry& instance();

  void register_backend(std::string backend_id, Factory factory, Restorer restorer);
  bool contains(std::string_view backend_id) const;
  std::vector<std::string> backend_ids() const;

  std::unique_ptr<EmbeddingBackend> create(std::string_view backend_id,
                                           const BackendOptions& options) const;
  std::unique_ptr<EmbeddingBackend> restore(std::string_view backend_id, std::istream& state) const;

 private:
  BackendRegistry();

  struct Entry {
    std::string id;
    Factory factory;
    Restorer restorer;
  };
  const Entry& find(std::string_view backend_id) const;

  std::vector<Entry> entries_;
};

// The pretrained encoders compared during model selection.
std::span<const std::string_view> pretrained_backend_ids();

}  // namespace cclf
