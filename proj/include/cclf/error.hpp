#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cclf {

// Stable numeric values; the C API returns these unchanged.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIo = 2,
  kMissingColumn = 10,
  kBadLabel = 11,
  kEmptyFile = 12,
  kUnknownCategory = 13,
  kBadPartition = 14,
  kMalformedCsv = 15,
  kSingleClassInput = 20,
  kBackendUnavailable = 30,
  kNonFiniteLoss = 31,
  kDimensionMismatch = 32,
  kSingleClassLabels = 40,
  kNonFiniteObjective = 41,
  kLengthMismatch = 50,
  kMissingCategory = 51,
  kCategoryMismatch = 52,
  kInsufficientSamples = 60,
  kBoundsError = 61,
  kVariantMismatch = 62,
  kBadArtifact = 63,
  kInternal = 99,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace cclf
