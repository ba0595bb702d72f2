#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace duet {

enum class ErrorCode {
  kInvalidInput,
  kNotPositiveDefinite,
  kDimensionMismatch,
  kInvalidHyperparam,
  kMissingWeights,
  kUndefinedMetric,
  kParseError,
  kEmptyDataset,
  kUnknownLabel,
  kUnsupportedVersion,
  kCorruptModel,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. The message is prefixed with the
// error kind so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace duet
