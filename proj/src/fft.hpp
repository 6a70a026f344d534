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

#include <complex>
#include <vector>

namespace voicebench {

// In-place iterative radix-2 FFT. a.size() must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse = false);

// Magnitude of the non-negative-frequency bins (n/2 + 1 values) of a real
// signal zero-padded/truncated to n samples. n must be a power of two.
std::vector<double> real_fft_magnitude(const double* x, size_t len, size_t n);

}  // namespace voicebench
