// Copyright 2026 The emtest Authors
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

namespace emtest {

// Numeric values are part of the C ABI (see emtest.h); append only.
enum class ErrorCode : int {
  kBadArgument = 1,
  kBadEdge = 2,
  kBadRadius = 3,
  kTooFewMics = 4,
  kApertureOnCube = 5,
  kBadGeometry = 6,
  kBadFrequency = 7,
  kEvaluationAtSource = 8,
  kFrequencyMismatch = 9,
  kNoActiveMics = 10,
  kEmptyGrid = 11,
  kChannelMismatch = 12,
  kUndersampledStimulus = 13,
  kBadDuration = 14,
  kIoFailure = 15,
  kFormatViolation = 16,
  kFocusOutsideSphere = 17,
  kBadTau0 = 18,
  kZeroField = 19,
  kWindowTooShort = 20,
  kNyquistViolation = 21,
  kZeroFundamental = 22,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace emtest
