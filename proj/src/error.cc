/*
 * Copyright 2026 The Seedstab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seedstab/error.h"

namespace seedstab {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingId: return "MissingId";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDuplicateSeed: return "DuplicateSeed";
    case ErrorCode::kDuplicateTask: return "DuplicateTask";
    case ErrorCode::kVariantMismatch: return "VariantMismatch";
    case ErrorCode::kEmptyRunSet: return "EmptyRunSet";
    case ErrorCode::kTaskMismatch: return "TaskMismatch";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonBinaryLabels: return "NonBinaryLabels";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kUnsupportedKindForVariant: return "UnsupportedKindForVariant";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTokenLengthMismatch: return "TokenLengthMismatch";
    case ErrorCode::kMisalignedRuns: return "MisalignedRuns";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kNeedAtLeastTwoRuns: return "NeedAtLeastTwoRuns";
    case ErrorCode::kMissingSize: return "MissingSize";
    case ErrorCode::kTooFewTasks: return "TooFewTasks";
    case ErrorCode::kRowTooShort: return "RowTooShort";
    case ErrorCode::kUnsupportedScorerKind: return "UnsupportedScorerKind";
    case ErrorCode::kSeedSetMismatch: return "SeedSetMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Compose(ErrorCode code, const std::string& subject,
                    const std::string& message) {
  std::string out(ErrorCodeName(code));
  if (!subject.empty()) {
    out += "(\"" + subject + "\")";
  }
  if (!message.empty()) {
    out += ": " + message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string subject, const std::string& message)
    : std::runtime_error(Compose(code, subject, message)),
      code_(code),
      subject_(std::move(subject)) {}

}  // namespace seedstab
