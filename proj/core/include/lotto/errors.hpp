#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lotto {

enum class ErrorCode {
  kEmptyGroup,
  kDuplicateWord,
  kInvalidWord,
  kIndexOutOfRange,
  kParseError,
  kIoError,
  kFormatMismatch,
  kInvalidTask,
  kInvalidInstance,
  kBackendUnavailable,
  kMultiTokenLabelWord,
  kNonFiniteLogit,
  kProtocolError,
  kDimensionMismatch,
  kDegeneratePrior,
  kEmptyInput,
  kEmptyDataset,
  kEmptyEnsemble,
  kEmptyTestSet,
  kClassMismatch,
  kLexiconMismatch,
  kInsufficientData,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

  bool is_backend_failure() const noexcept {
    return code_ == ErrorCode::kBackendUnavailable || code_ == ErrorCode::kMultiTokenLabelWord ||
           code_ == ErrorCode::kNonFiniteLogit || code_ == ErrorCode::kProtocolError;
  }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace lotto
