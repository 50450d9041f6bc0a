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

#include "emtest/error.hpp"

namespace emtest {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kBadEdge: return "BadEdge";
    case ErrorCode::kBadRadius: return "BadRadius";
    case ErrorCode::kTooFewMics: return "TooFewMics";
    case ErrorCode::kApertureOnCube: return "ApertureOnCube";
    case ErrorCode::kBadGeometry: return "BadGeometry";
    case ErrorCode::kBadFrequency: return "BadFrequency";
    case ErrorCode::kEvaluationAtSource: return "EvaluationAtSource";
    case ErrorCode::kFrequencyMismatch: return "FrequencyMismatch";
    case ErrorCode::kNoActiveMics: return "NoActiveMics";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kUndersampledStimulus: return "UndersampledStimulus";
    case ErrorCode::kBadDuration: return "BadDuration";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kFormatViolation: return "FormatViolation";
    case ErrorCode::kFocusOutsideSphere: return "FocusOutsideSphere";
    case ErrorCode::kBadTau0: return "BadTau0";
    case ErrorCode::kZeroField: return "ZeroField";
    case ErrorCode::kWindowTooShort: return "WindowTooShort";
    case ErrorCode::kNyquistViolation: return "NyquistViolation";
    case ErrorCode::kZeroFundamental: return "ZeroFundamental";
  }
  return "Unknown";
}

}  // namespace emtest
