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

#include <vector>

#include "util.hpp"
#include "wav.hpp"

namespace voicebench {

// Fixed extraction parameters; they are part of the model bundle contract,
// so changing a default invalidates previously trained bundles.
struct MfccParams {
  double window_ms = 25.0;  // Hann (periodic)
  double hop_ms = 10.0;
  int fft_size = 512;
  int n_mels = 40;        // triangular filters, HTK mel scale, 0..fmax
  int n_coeffs = 20;      // coefficient 0 (log energy) retained
  double fmax = 8000.0;
  double log_floor = 1e-10;
};

// 20 x T coefficient matrix. Frames are left-aligned (no centering):
// T = 1 + floor((N - window) / hop). Throws if the recording is shorter
// than one window.
Matrix extract_mfcc(const Recording& rec, const MfccParams& params = {});

// Trim to the first target_frames columns / zero-pad on the right, then
// flatten row-major: all frames of coefficient 0, then coefficient 1, ...
std::vector<double> standardize_mfcc(const Matrix& m, int target_frames);

// round(mean frame count) over the training set; stored in the bundle so
// test-time standardization matches training.
int mfcc_target_frames(const std::vector<int>& frame_counts);

// Value of coefficient 0 for a silent frame (all mel energies at the floor).
double mfcc_silence_c0(const MfccParams& params = {});

}  // namespace voicebench
