#include "duet/error.hpp"

namespace duet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidHyperparam: return "InvalidHyperparam";
    case ErrorCode::kMissingWeights: return "MissingWeights";
    case ErrorCode::kUndefinedMetric: return "UndefinedMetric";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kCorruptModel: return "CorruptModel";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace duet
