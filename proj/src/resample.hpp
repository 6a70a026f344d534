// Copyright 2026 The VoiceBench Authors
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

#include "wav.hpp"

namespace voicebench {

// Band-limited sample-rate conversion: Kaiser-windowed sinc interpolation,
// 64 taps per output phase. Equal rates return the input unchanged.
Recording resample(const Recording& rec, int target_rate);

}  // namespace voicebench
