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

#include "tonekit/error.hpp"

namespace tonekit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kUnknownParameter: return "UnknownParameter";
    case ErrorKind::kUnknownPreset: return "UnknownPreset";
    case ErrorKind::kNonNumericValue: return "NonNumericValue";
    case ErrorKind::kEmptyIntent: return "EmptyIntent";
    case ErrorKind::kNoObjectFound: return "NoObjectFound";
    case ErrorKind::kMalformedObject: return "MalformedObject";
    case ErrorKind::kImageTooLarge: return "ImageTooLarge";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kCorruptFile: return "CorruptFile";
    case ErrorKind::kUnreadableFile: return "UnreadableFile";
    case ErrorKind::kSchemaViolation: return "SchemaViolation";
    case ErrorKind::kTestSizeTooLarge: return "TestSizeTooLarge";
    case ErrorKind::kZeroStarted: return "ZeroStarted";
    case ErrorKind::kEmptySampleSet: return "EmptySampleSet";
    case ErrorKind::kNoOverlap: return "NoOverlap";
    case ErrorKind::kMissingBaseline: return "MissingBaseline";
    case ErrorKind::kGenerationFailed: return "GenerationFailed";
    case ErrorKind::kDuplicateIntent: return "DuplicateIntent";
    case ErrorKind::kTimeout: return "Timeout";
    case ErrorKind::kConnectionFailed: return "ConnectionFailed";
    case ErrorKind::kHttpError: return "HttpError";
    case ErrorKind::kExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::kUndecidableReply: return "UndecidableReply";
    case ErrorKind::kNoStubMatch: return "NoStubMatch";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

ErrorClass classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTimeout:
    case ErrorKind::kConnectionFailed:
    case ErrorKind::kHttpError:
    case ErrorKind::kExhaustedRetries:
    case ErrorKind::kUndecidableReply:
    case ErrorKind::kNoStubMatch:
    case ErrorKind::kGenerationFailed:
      return ErrorClass::kEndpoint;
    case ErrorKind::kIo:
      return ErrorClass::kRuntime;
    default:
      return ErrorClass::kInvalidInput;
  }
}

Error::Error(ErrorKind kind, std::string message, std::vector<std::string> details)
    : std::runtime_error(std::move(message)), kind_(kind), details_(std::move(details)) {}

}  // namespace tonekit
