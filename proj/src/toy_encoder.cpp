#include "cclf/toy_encoder.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cclf/error.hpp"
#include "cclf/rng.hpp"
#include "cclf/textio.hpp"

namespace cclf {

ToyHashEncoder::ToyHashEncoder(std::size_t dimension, std::uint64_t seed) : seed_(seed) {
  if (dimension < 2) fail(ErrorCode::kInvalidArgument, "toy encoder dimension must be >= 2");
  const auto d = static_cast<Eigen::Index>(dimension);
  weights_ = Eigen::MatrixXd::Identity(d, d);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) weights_(r, c) += rng.uniform(-kInitNoise, kInitNoise);
  }
}

ToyHashEncoder::ToyHashEncoder(Eigen::MatrixXd weights, std::uint64_t seed)
    : weights_(std::move(weights)), seed_(seed) {}

std::vector<std::string> ToyHashEncoder::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '_' || c == '@') {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::uint64_t ToyHashEncoder::fnv1a(std::string_view token) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Eigen::VectorXd ToyHashEncoder::features(std::string_view text) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(weights_.cols());
  const auto d = static_cast<std::uint64_t>(weights_.cols());
  for (const auto& token : tokenize(text)) x(static_cast<Eigen::Index>(fnv1a(token) % d)) += 1.0;
  return x;
}

std::vector<EmbeddingVector> ToyHashEncoder::encode(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.emplace_back(weights_ * features(t));
  return out;
}

double ToyHashEncoder::pair_loss(const Eigen::MatrixXd& weights, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b, double target) {
  const double r = target - cosine(weights * a, weights * b);
  return r * r;
}

Eigen::MatrixXd ToyHashEncoder::pair_gradient(const Eigen::MatrixXd& weights,
                                              const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                              double target) {
  const Eigen::VectorXd u = weights * a;
  const Eigen::VectorXd v = weights * b;
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return Eigen::MatrixXd::Zero(weights.rows(), weights.cols());
  const double c = u.dot(v) / (nu * nv);
  const Eigen::VectorXd dc_du = v / (nu * nv) - c * u / (nu * nu);
  const Eigen::VectorXd dc_dv = u / (nu * nv) - c * v / (nv * nv);
  const double dl_dc = -2.0 * (target - c);
  return dl_dc * (dc_du * a.transpose() + dc_dv * b.transpose());
}

TrainingLog ToyHashEncoder::fine_tune(std::span<const SentencePair> pairs,
                                      const FineTuneConfig& config) {
  if (pairs.empty()) fail(ErrorCode::kInvalidArgument, "fine_tune needs at least one pair");
  if (config.epochs < 1) fail(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (config.batch_size < 1) fail(ErrorCode::kInvalidArgument, "batch size must be >= 1");
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    fail(ErrorCode::kInvalidArgument, "learning rate must be finite and non-negative");
  }

  std::vector<Eigen::VectorXd> fa, fb;
  fa.reserve(pairs.size());
  fb.reserve(pairs.size());
  for (const auto& p : pairs) {
    fa.push_back(features(p.text_a));
    fb.push_back(features(p.text_b));
  }

  auto mean_loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      total += pair_loss(weights_, fa[i], fb[i], pairs[i].target);
    }
    return total / static_cast<double>(pairs.size());
  };

  TrainingLog log;
  std::vector<std::size_t> order(pairs.size());
  const auto batch = static_cast<std::size_t>(config.batch_size);
  Eigen::MatrixXd grad(weights_.rows(), weights_.cols());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order.begin(), order.end());

    if (config.learning_rate > 0.0) {
      for (std::size_t start = 0; start < order.size(); start += batch) {
        const std::size_t stop = std::min(order.size(), start + batch);
        grad.setZero();
        for (std::size_t k = start; k < stop; ++k) {
          const auto i = order[k];
          grad += pair_gradient(weights_, fa[i], fb[i], pairs[i].target);
        }
        weights_ -= (config.learning_rate / static_cast<double>(stop - start)) * grad;
      }
    }

    const double loss = mean_loss();
    if (!std::isfinite(loss) || !weights_.allFinite()) {
      fail(ErrorCode::kNonFiniteLoss, "loss diverged at epoch " + std::to_string(epoch) +
                                          " (learning rate " +
                                          format_double(config.learning_rate) + ")");
    }
    log.epoch_loss.push_back(loss);
  }
  return log;
}

std::unique_ptr<EmbeddingBackend> ToyHashEncoder::clone() const {
  return std::unique_ptr<EmbeddingBackend>(new ToyHashEncoder(weights_, seed_));
}

void ToyHashEncoder::set_weights(Eigen::MatrixXd weights) {
  if (weights.rows() != weights_.rows() || weights.cols() != weights_.cols()) {
    fail(ErrorCode::kDimensionMismatch, "weight matrix shape does not match encoder dimension");
  }
  weights_ = std::move(weights);
}

void ToyHashEncoder::save_state(std::ostream& out) const {
  out << kBackendId << " 1\n";
  out << "dimension " << weights_.rows() << "\n";
  out << "seed " << seed_ << "\n";
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    for (Eigen::Index c = 0; c < weights_.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(weights_(r, c));
    }
    out << '\n';
  }
}

std::unique_ptr<ToyHashEncoder> ToyHashEncoder::load_state(std::istream& in) {
  std::string magic, key;
  int version = 0;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  if (!(in >> magic >> version) || magic != kBackendId || version != 1) {
    fail(ErrorCode::kBadArtifact, "toy encoder state has a bad header");
  }
  if (!(in >> key >> dimension) || key != "dimension" || dimension < 2) {
    fail(ErrorCode::kBadArtifact, "toy encoder state is missing its dimension");
  }
  if (!(in >> key >> seed) || key != "seed") {
    fail(ErrorCode::kBadArtifact, "toy encoder state is missing its seed");
  }
  const auto d = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXd weights(d, d);
  std::string token;
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      if (!(in >> token)) fail(ErrorCode::kBadArtifact, "toy encoder state is truncated");
      weights(r, c) = parse_double(token);
    }
  }
  return std::unique_ptr<ToyHashEncoder>(new ToyHashEncoder(std::move(weights), seed));
}

}  // namespace cclf
