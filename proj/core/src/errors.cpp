#include "lotto/errors.hpp"

namespace lotto {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kDuplicateWord: return "DuplicateWord";
    case ErrorCode::kInvalidWord: return "InvalidWord";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatMismatch: return "FormatMismatch";
    case ErrorCode::kInvalidTask: return "InvalidTask";
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kMultiTokenLabelWord: return "MultiTokenLabelWord";
    case ErrorCode::kNonFiniteLogit: return "NonFiniteLogit";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDegeneratePrior: return "DegeneratePrior";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kEmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kClassMismatch: return "ClassMismatch";
    case ErrorCode::kLexiconMismatch: return "LexiconMismatch";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lotto
