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

#include <array>
#include <vector>

#include "wav.hpp"

namespace voicebench {

// 88-slot acoustic descriptor vector for sustained-vowel recordings.
//
// Slot groups (see acoustic_feature_names() for the full list):
//   - F0 statistics from an autocorrelation pitch tracker (60-500 Hz search)
//   - voice quality: jitter (period-to-period), shimmer (amplitude), HNR
//   - harmonic levels (H1-H2, H1-A3)
//   - spectral shape per frame: centroid, slopes (0-500, 500-1500 Hz), flux,
//     alpha ratio (1-5 kHz vs 50 Hz-1 kHz), Hammarberg index
//   - cepstral coefficients 1-4 (mean, stddev)
//   - loudness (frame RMS in dB): percentiles and rise/fall slopes
//   - spectral band energy fractions
//   - temporal voicing statistics and total duration
//
// Pitch-dependent slots are NaN ("missing") when no voiced frames exist;
// downstream imputation fills them. Degenerate audio never raises.
//
// Externally computed 88-dim vectors (e.g. a reference eGeMAPSv02 toolchain)
// can bypass this extractor via the embedding interchange format with dim=88.
inline constexpr int kAcousticDim = 88;

const std::array<const char*, kAcousticDim>& acoustic_feature_names();

std::vector<double> extract_acoustic(const Recording& rec);

}  // namespace voicebench
