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

#include <cstdint>
#include <string>
#include <vector>

namespace voicebench {

// Mono audio, amplitudes in [-1, 1].
struct Recording {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  uint64_t frames = 0;
  double duration = 0.0;
};

// PCM WAV only: 8/16/24/32-bit integer or 32-bit float. Multi-channel input
// is averaged to mono.
Recording decode_wav(const std::string& path);

// Header-only parse; cheap way to get durations for dataset comparison.
WavInfo wav_info(const std::string& path);

// 16-bit PCM writer (round-trip helper for tools and synthetic corpora).
void write_wav(const std::string& path, const Recording& rec);

}  // namespace voicebench
