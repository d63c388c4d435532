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

#ifndef SEEDSTAB_ERROR_H_
#define SEEDSTAB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace seedstab {

// Every failure raised by the library carries one of these codes. The CLI
// prints the code name, so names are part of the user-facing contract.
enum class ErrorCode {
  kMissingId,
  kUnknownId,
  kDuplicateId,
  kDuplicateSeed,
  kDuplicateTask,
  kVariantMismatch,
  kEmptyRunSet,
  kTaskMismatch,
  kInvalidValue,
  kLengthMismatch,
  kNonBinaryLabels,
  kZeroVariance,
  kUnsupportedKindForVariant,
  kEmptyInput,
  kTokenLengthMismatch,
  kMisalignedRuns,
  kMissingGold,
  kNeedAtLeastTwoRuns,
  kMissingSize,
  kTooFewTasks,
  kRowTooShort,
  kUnsupportedScorerKind,
  kSeedSetMismatch,
  kParseError,
  kSchemaError,
  kEmptyFile,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  // "subject" names the offending item (an id, a field, "path:line:col")
  // and may be empty.
  Error(ErrorCode code, std::string subject, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace seedstab

#endif  // SEEDSTAB_ERROR_H_
