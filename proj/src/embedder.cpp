#include "cclf/embedder.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cclf/error.hpp"
#include "cclf/toy_encoder.hpp"

namespace cclf {

EmbeddingVector EmbeddingBackend::encode_one(std::string_view text) const {
  const std::string owned(text);
  return encode(std::span<const std::string>(&owned, 1)).front();
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return u.dot(v) / (nu * nv);
}

double cosine_regression_loss(const EmbeddingBackend& backend,
                              std::span<const SentencePair> pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& p : pairs) {
    const double r = p.target - cosine(backend.encode_one(p.text_a), backend.encode_one(p.text_b));
    total += r * r;
  }
  return total / static_cast<double>(pairs.size());
}

std::span<const std::string_view> pretrained_backend_ids() {
  static constexpr std::array<std::string_view, 4> ids{
      "paraphrase-MiniLM-L3-v2",
      "all-MiniLM-L6-v2",
      "all-mpnet-base-v2",
      "st-codesearch-distilroberta-base",
  };
  return ids;
}

BackendRegistry& BackendRegistry::instance() {
  static BackendRegistry registry;
  return registry;
}

BackendRegistry::BackendRegistry() {
  register_backend(
      std::string(ToyHashEncoder::kBackendId),
      [](const BackendOptions& o) -> std::unique_ptr<EmbeddingBackend> {
        return std::make_unique<ToyHashEncoder>(o.dimension, o.seed);
      },
      [](std::istream& in) -> std::unique_ptr<EmbeddingBackend> {
        return ToyHashEncoder::load_state(in);
      });
  for (auto id : pretrained_backend_ids()) {
    const std::string name(id);
    auto unavailable = [name]() -> std::unique_ptr<EmbeddingBackend> {
      fail(ErrorCode::kBackendUnavailable,
           "'" + name + "' needs an external sentence-transformer runtime, none is linked");
    };
    register_backend(
        name, [unavailable](const BackendOptions&) { return unavailable(); },
        [unavailable](std::istream&) { return unavailable(); });
  }
}

void BackendRegistry::register_backend(std::string backend_id, Factory factory,
                                       Restorer restorer) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const Entry& e) { return e.id == backend_id; });
  if (it != entries_.end()) {
    it->factory = std::move(factory);
    it->restorer = std::move(restorer);
    return;
  }
  entries_.push_back({std::move(backend_id), std::move(factory), std::move(restorer)});
}

bool BackendRegistry::contains(std::string_view backend_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.id == backend_id; });
}

std::vector<std::string> BackendRegistry::backend_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : entries_) ids.push_back(e.id);
  return ids;
}

const BackendRegistry::Entry& BackendRegistry::find(std::string_view backend_id) const {
  for (const auto& e : entries_) {
    if (e.id == backend_id) return e;
  }
  fail(ErrorCode::kBackendUnavailable, "no backend registered as '" + std::string(backend_id) + "'");
}

std::unique_ptr<EmbeddingBackend> BackendRegistry::create(std::string_view backend_id,
                                                          const BackendOptions& options) const {
  return find(backend_id).factory(options);
}

std::unique_ptr<EmbeddingBackend> BackendRegistry::restore(std::string_view backend_id,
                                                           std::istream& state) const {
  return find(backend_id).restorer(state);
}

}  // namespace cclf
