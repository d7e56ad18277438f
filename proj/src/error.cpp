// Copyright 2026 The photostat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "photostat/error.hpp"

namespace photostat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::TruncationTooSmall: return "truncation-too-small";
    case ErrorKind::ZeroProbabilityDivision: return "zero-probability-division";
    case ErrorKind::NonFinite: return "non-finite-value";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::MalformedFile: return "malformed-file";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace photostat
