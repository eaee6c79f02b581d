#include "cclf/pairgen.hpp"

#include <fstream>

#include "cclf/csv.hpp"
#include "cclf/error.hpp"
#include "cclf/rng.hpp"

namespace cclf {

std::vector<SentencePair> generate_pairs(std::span<const LabeledText> samples,
                                         const PairGenConfig& config) {
  if (config.iterations < 0) fail(ErrorCode::kInvalidArgument, "pair iterations must be >= 0");
  if (config.iterations == 0) return {};

  std::vector<std::size_t> by_label[2];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int label = samples[i].label;
    if (label != 0 && label != 1) {
      fail(ErrorCode::kBadLabel, "sample " + std::to_string(i) + " has label " + std::to_string(label));
    }
    by_label[label].push_back(i);
  }
  if (by_label[0].empty() || by_label[1].empty()) {
    fail(ErrorCode::kSingleClassInput, "pair generation needs both positive and negative samples");
  }

  Rng rng(config.seed);
  std::vector<SentencePair> pairs;
  pairs.reserve(2 * static_cast<std::size_t>(config.iterations) * samples.size());
  for (int round = 0; round < config.iterations; ++round) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const int label = samples[i].label;
      const auto& same = by_label[label];
      const auto& other = by_label[1 - label];

      std::size_t partner = i;
      if (same.size() > 1) {
        // Draw from the same-label pool minus self.
        std::size_t k = rng.index(same.size() - 1);
        if (same[k] == i) k = same.size() - 1;
        partner = same[k];
      }
      pairs.push_back({samples[i].text, samples[partner].text, 1.0});
      pairs.push_back({samples[i].text, samples[other[rng.index(other.size())]].text, 0.0});
    }
  }
  return pairs;
}

void write_pairs_csv(std::span<const SentencePair> pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  csv::write_row(out, {"text_a", "text_b", "target"});
  for (const auto& p : pairs) {
    csv::write_row(out, {p.text_a, p.text_b, p.target == 1.0 ? "1.0" : "0.0"});
  }
}

}  // namespace cclf
