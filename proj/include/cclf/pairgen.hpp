#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cclf {

struct LabeledText {
  std::string text;
  int label = 0;
};

// Cosine-similarity regression target: 1.0 for same-label pairs, 0.0 otherwise.
struct SentencePair {
  std::string text_a;
  std::string text_b;
  double target = 0.0;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct PairGenConfig {
  int iterations = 20;
  std::uint64_t seed = 0;
};

// For each of `iterations` rounds, every sample is paired once with a
// uniformly drawn same-label partner and once with a uniformly drawn
// different-label partner, giving 2 * iterations * N pairs. The sample itself
// is only chosen as its own partner when no other same-label sample exists.
// Throws SingleClassInput when iterations > 0 and a label is absent.
std::vector<SentencePair> generate_pairs(std::span<const LabeledText> samples,
                                         const PairGenConfig& config);

// Debug dump with columns text_a,text_b,target.
void write_pairs_csv(std::span<const SentencePair> pairs, const std::filesystem::path& path);

}  // namespace cclf
