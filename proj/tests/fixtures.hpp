// Synthetic datasets shared by the unit tests, the acceptance suite and the
// CLI fixture generator.
#pragma once

#include <array>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

#include "cclf/corpus.hpp"
#include "cclf/rng.hpp"

#include <unistd.h>

namespace cclf::testing {

inline constexpr std::array<const char*, 8> kOwnerWords = {"written", "maintained", "created", "copyright",
                                                           "originally", "contributed", "ported", "revised"};
inline constexpr std::array<const char*, 6> kOwnerNames = {"alice", "bob", "carol", "dmitri", "erin", "farouk"};
inline constexpr std::array<const char*, 12> kOtherWords = {"returns", "value", "computes", "checksum",
                                                            "list",    "index", "parses",   "buffer",
                                                            "stream",  "sorts", "hashes",   "digest"};

inline std::string owner_sentence(Rng& rng) {
  return std::string(kOwnerWords[rng.index(kOwnerWords.size())]) + " by " +
         kOwnerNames[rng.index(kOwnerNames.size())] + " @author";
}

inline std::string other_sentence(Rng& rng) {
  std::string s = kOtherWords[rng.index(kOtherWords.size())];
  for (int i = 0; i < 3; ++i) s += std::string(" ") + kOtherWords[rng.index(kOtherWords.size())];
  return s;
}

// Positives carry "@author" and ownership words, negatives a disjoint vocabulary.
inline CategoryDataset separable_dataset(int train_per_class = 40, int test_per_class = 10, std::uint64_t seed = 7,
                                         CategoryId category = {Language::kJava, "Ownership"}) {
  Rng rng(seed);
  std::vector<CommentSample> samples;
  std::int64_t id = 0;
  auto add = [&](Partition partition, int label, int n) {
    for (int i = 0; i < n; ++i) {
      CommentSample s;
      s.id = id++;
      s.text = label == 1 ? owner_sentence(rng) : other_sentence(rng);
      s.class_file = "Class" + std::to_string(rng.index(5)) + ".java";
      s.partition = partition;
      s.category = category;
      s.label = label;
      samples.push_back(std::move(s));
    }
  };
  add(Partition::kTrain, 1, train_per_class);
  add(Partition::kTrain, 0, train_per_class);
  add(Partition::kTest, 1, test_per_class);
  add(Partition::kTest, 0, test_per_class);
  return CategoryDataset::from_samples(category, std::move(samples));
}

// A dataset per reference category with exactly the reference counts.
inline std::vector<CategoryDataset> reference_shaped_corpus(std::uint64_t seed = 11) {
  std::vector<CategoryDataset> out;
  Rng rng(seed);
  std::int64_t id = 0;
  for (const auto& category : reference_categories()) {
    const auto counts = *reference_counts(category);
    std::vector<CommentSample> samples;
    auto add = [&](Partition partition, int label, std::int64_t n) {
      for (std::int64_t i = 0; i < n; ++i) {
        samples.push_back({id++, label == 1 ? owner_sentence(rng) : other_sentence(rng),
                           "File" + std::to_string(i % 17) + ".src", partition, category, label});
      }
    };
    add(Partition::kTrain, 1, counts.train_pos);
    add(Partition::kTrain, 0, counts.train_neg);
    add(Partition::kTest, 1, counts.test_pos);
    add(Partition::kTest, 0, counts.test_neg);
    out.push_back(CategoryDataset::from_samples(category, std::move(samples)));
  }
  return out;
}

inline std::filesystem::path corpus_path(const std::filesystem::path& root, const CategoryId& category) {
  std::string language(to_string(category.language));
  for (auto& c : language) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return root / language / (category.name + ".csv");
}

inline void write_corpus(const std::filesystem::path& root, const std::vector<CategoryDataset>& datasets) {
  for (const auto& d : datasets) {
    const auto path = corpus_path(root, d.category());
    std::filesystem::create_directories(path.parent_path());
    save_category(d, path);
  }
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cclf-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace cclf::testing
