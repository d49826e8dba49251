/*
 * Copyright 2026 The smartagg Authors.
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

#include "smartagg/error.hpp"

namespace smartagg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kKeygenFailure: return "keygen-failure";
    case ErrorCode::kPlaintextOutOfRange: return "plaintext-out-of-range";
    case ErrorCode::kMalformedCiphertext: return "malformed-ciphertext";
    case ErrorCode::kDomainMismatch: return "domain-mismatch";
    case ErrorCode::kEncodingOverflow: return "encoding-overflow";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNoActiveMeters: return "no-active-meters";
    case ErrorCode::kRoleError: return "role-error";
    case ErrorCode::kDuplicateReport: return "duplicate-report";
    case ErrorCode::kIncompleteRound: return "incomplete-round";
    case ErrorCode::kInverseOverflow: return "inverse-overflow";
    case ErrorCode::kRingTooSmall: return "ring-too-small";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kGapError: return "gap-error";
    case ErrorCode::kConfigError: return "config-error";
    case ErrorCode::kIoError: return "io-error";
  }
  return "unknown";
}

}  // namespace smartagg
