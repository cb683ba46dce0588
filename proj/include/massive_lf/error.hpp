// Copyright 2026 The massive-lf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace massive_lf {

enum class ErrorKind {
  // Compact logical forms.
  kUnbalancedBrackets,
  kMissingIntentRoot,
  kEmptySlotValue,
  kNestedIntent,
  kUnexpectedBracket,
  kUnexpectedText,
  kMalformedLabel,
  kInvalidUtf8,
  // Inline annotations.
  kMalformedAnnotation,
  kOverlappingSpans,
  kSpanOutOfRange,
  kMissingSpan,
  kSpanValueMismatch,
  // Conversion.
  kUnparseablePrediction,
  kSlotValueNotFound,
  // Corpus assembly and evaluation.
  kMissingJoinKey,
  kDuplicateKey,
  kMissingPrediction,
  kUnknownPredictionId,
  kDuplicatePrediction,
  kUnknownLocale,
  kInconsistentLanguageSets,
  kMissingNmtTranslation,
  // Files.
  kMalformedJsonLine,
  kInvariantViolation,
  kMalformedFile,
  kIo,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorKind::kMissingIntentRoot: return "MissingIntentRoot";
    case ErrorKind::kEmptySlotValue: return "EmptySlotValue";
    case ErrorKind::kNestedIntent: return "NestedIntent";
    case ErrorKind::kUnexpectedBracket: return "UnexpectedBracket";
    case ErrorKind::kUnexpectedText: return "UnexpectedText";
    case ErrorKind::kMalformedLabel: return "MalformedLabel";
    case ErrorKind::kInvalidUtf8: return "InvalidUtf8";
    case ErrorKind::kMalformedAnnotation: return "MalformedAnnotation";
    case ErrorKind::kOverlappingSpans: return "OverlappingSpans";
    case ErrorKind::kSpanOutOfRange: return "SpanOutOfRange";
    case ErrorKind::kMissingSpan: return "MissingSpan";
    case ErrorKind::kSpanValueMismatch: return "SpanValueMismatch";
    case ErrorKind::kUnparseablePrediction: return "UnparseablePrediction";
    case ErrorKind::kSlotValueNotFound: return "SlotValueNotFound";
    case ErrorKind::kMissingJoinKey: return "MissingJoinKey";
    case ErrorKind::kDuplicateKey: return "DuplicateKey";
    case ErrorKind::kMissingPrediction: return "MissingPrediction";
    case ErrorKind::kUnknownPredictionId: return "UnknownPredictionId";
    case ErrorKind::kDuplicatePrediction: return "DuplicatePrediction";
    case ErrorKind::kUnknownLocale: return "UnknownLocale";
    case ErrorKind::kInconsistentLanguageSets: return "InconsistentLanguageSets";
    case ErrorKind::kMissingNmtTranslation: return "MissingNmtTranslation";
    case ErrorKind::kMalformedJsonLine: return "MalformedJsonLine";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kMalformedFile: return "MalformedFile";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers can branch
// without parsing messages. what() is "<Kind>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Re-raises `e` with extra leading context, keeping its kind.
[[noreturn]] inline void rethrow_with_context(const Error& e, std::string_view context) {
  throw Error(e.kind(), std::string(context) + ": " + e.detail());
}

}  // namespace massive_lf
