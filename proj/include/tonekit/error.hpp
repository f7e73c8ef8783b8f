// Copyright 2026 The tonekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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
#include <vector>

namespace tonekit {

enum class ErrorKind {
  kInvalidInput,
  kUnknownParameter,
  kUnknownPreset,
  kNonNumericValue,
  kEmptyIntent,
  kNoObjectFound,
  kMalformedObject,
  kImageTooLarge,
  kUnsupportedFormat,
  kCorruptFile,
  kUnreadableFile,
  kSchemaViolation,
  kTestSizeTooLarge,
  kZeroStarted,
  kEmptySampleSet,
  kNoOverlap,
  kMissingBaseline,
  kGenerationFailed,
  kDuplicateIntent,
  kTimeout,
  kConnectionFailed,
  kHttpError,
  kExhaustedRetries,
  kUndecidableReply,
  kNoStubMatch,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Coarse grouping used for CLI exit codes.
enum class ErrorClass { kInvalidInput, kEndpoint, kRuntime };
ErrorClass classify(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::vector<std::string> details = {});

  ErrorKind kind() const noexcept { return kind_; }
  // Structured payload: offending field names, byte offsets, etc.
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> details_;
};

}  // namespace tonekit
