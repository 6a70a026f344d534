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

#include "resample.hpp"

#include <cmath>
#include <vector>

#include "error.hpp"

namespace voicebench {

namespace {

constexpr int kHalfWidth = 32;       // 64 taps per output sample
constexpr int kPhases = 512;         // phase table resolution
constexpr double kKaiserBeta = 7.0;  // ~70 dB stopband

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= half_x / k;
    const double add = term * term;
    sum += add;
    if (add < sum * 1e-17) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::fabs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Kaiser-windowed sinc, cutoff fc in cycles per input sample, support
// |u| <= kHalfWidth.
double kernel(double u, double fc, double i0_beta) {
  const double w = u / kHalfWidth;
  if (w <= -1.0 || w >= 1.0) return 0.0;
  const double kaiser = bessel_i0(kKaiserBeta * std::sqrt(1.0 - w * w)) / i0_beta;
  return 2.0 * fc * sinc(2.0 * fc * u) * kaiser;
}

}  // namespace

Recording resample(const Recording& rec, int target_rate) {
  if (target_rate <= 0) fail(ErrorCode::InvalidArgument, "resample: target_rate must be > 0");
  if (rec.sample_rate <= 0) fail(ErrorCode::InvalidArgument, "resample: recording has no sample rate");
  if (target_rate == rec.sample_rate) return rec;

  Recording out;
  out.sample_rate = target_rate;
  const int64_t n_in = static_cast<int64_t>(rec.samples.size());
  const int64_t n_out =
      (n_in * target_rate + rec.sample_rate / 2) / rec.sample_rate;
  out.samples.assign(static_cast<size_t>(n_out), 0.0);
  if (n_in == 0 || n_out == 0) return out;

  const double ratio = static_cast<double>(target_rate) / rec.sample_rate;
  const double fc = 0.46 * std::min(1.0, ratio);
  const double i0_beta = bessel_i0(kKaiserBeta);

  // Polyphase table: row q holds the 64 tap weights for fractional offset
  // q / kPhases; adjacent rows are linearly interpolated at run time.
  const int taps = 2 * kHalfWidth;
  std::vector<double> table(static_cast<size_t>(kPhases + 1) * taps);
  for (int q = 0; q <= kPhases; ++q) {
    const double f = static_cast<double>(q) / kPhases;
    for (int k = 0; k < taps; ++k) {
      // Tap k reads input index i - kHalfWidth + 1 + k, offset u = t - index.
      const double u = f + kHalfWidth - 1 - k;
      table[static_cast<size_t>(q) * taps + k] = kernel(u, fc, i0_beta);
    }
  }

  const double* x = rec.samples.data();
  for (int64_t n = 0; n < n_out; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const auto i = static_cast<int64_t>(std::floor(t));
    const double f = t - static_cast<double>(i);
    const double qf = f * kPhases;
    const int q = static_cast<int>(qf);
    const double blend = qf - q;
    const double* row0 = &table[static_cast<size_t>(q) * taps];
    const double* row1 = row0 + taps;

    double acc = 0.0, wsum = 0.0;
    const int64_t base = i - kHalfWidth + 1;
    for (int k = 0; k < taps; ++k) {
      const double w = row0[k] + blend * (row1[k] - row0[k]);
      wsum += w;
      const int64_t idx = base + k;
      if (idx >= 0 && idx < n_in) acc += w * x[idx];
    }
    out.samples[static_cast<size_t>(n)] = wsum != 0.0 ? acc / wsum : 0.0;
  }
  return out;
}

}  // namespace voicebench
