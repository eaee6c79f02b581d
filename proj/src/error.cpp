#include "cclf/error.hpp"

namespace cclf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kBadPartition: return "BadPartition";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kSingleClassInput: return "SingleClassInput";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kNonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kMissingCategory: return "MissingCategory";
    case ErrorCode::kCategoryMismatch: return "CategoryMismatch";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kBoundsError: return "BoundsError";
    case ErrorCode::kVariantMismatch: return "VariantMismatch";
    case ErrorCode::kBadArtifact: return "BadArtifact";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace cclf
