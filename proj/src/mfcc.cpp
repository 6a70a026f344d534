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

#include "mfcc.hpp"

#include <cmath>

#include "error.hpp"
#include "fft.hpp"

namespace voicebench {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filterbank over FFT bins; row m holds filter m's bin weights.
Matrix mel_filterbank(const MfccParams& p, int sample_rate) {
  const int n_bins = p.fft_size / 2 + 1;
  Matrix fb(static_cast<size_t>(p.n_mels), static_cast<size_t>(n_bins), 0.0);

  const double mel_lo = hz_to_mel(0.0);
  const double mel_hi = hz_to_mel(p.fmax);
  std::vector<double> edges(static_cast<size_t>(p.n_mels) + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(p.n_mels + 1);
    edges[i] = mel_to_hz(mel);
  }

  const double bin_hz = static_cast<double>(sample_rate) / p.fft_size;
  for (int m = 0; m < p.n_mels; ++m) {
    const double left = edges[static_cast<size_t>(m)];
    const double center = edges[static_cast<size_t>(m) + 1];
    const double right = edges[static_cast<size_t>(m) + 2];
    for (int b = 0; b < n_bins; ++b) {
      const double hz = b * bin_hz;
      double w = 0.0;
      if (hz > left && hz < right) {
        w = hz <= center ? (hz - left) / (center - left) : (right - hz) / (right - center);
      }
      fb.at(static_cast<size_t>(m), static_cast<size_t>(b)) = w;
    }
  }
  return fb;
}

}  // namespace

double mfcc_silence_c0(const MfccParams& params) {
  // Orthonormal DCT-II of a constant vector: coefficient 0 is sqrt(M) * x.
  return std::sqrt(static_cast<double>(params.n_mels)) * std::log(params.log_floor);
}

Matrix extract_mfcc(const Recording& rec, const MfccParams& params) {
  if (rec.sample_rate <= 0) fail(ErrorCode::InvalidArgument, "extract_mfcc: recording has no sample rate");
  const auto window = static_cast<size_t>(std::llround(params.window_ms * rec.sample_rate / 1000.0));
  const auto hop = static_cast<size_t>(std::llround(params.hop_ms * rec.sample_rate / 1000.0));
  if (rec.samples.size() < window) {
    fail(ErrorCode::InvalidArgument,
         "extract_mfcc: recording shorter than one analysis window (" +
             std::to_string(rec.samples.size()) + " < " + std::to_string(window) + " samples)");
  }
  if (static_cast<size_t>(params.fft_size) < window) {
    fail(ErrorCode::InvalidArgument, "extract_mfcc: fft_size smaller than the window");
  }

  const size_t n_frames = 1 + (rec.samples.size() - window) / hop;
  const Matrix fb = mel_filterbank(params, rec.sample_rate);
  const int n_bins = params.fft_size / 2 + 1;

  std::vector<double> hann(window);
  for (size_t i = 0; i < window; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(window));
  }

  // DCT-II basis, orthonormal.
  const int M = params.n_mels;
  Matrix dct(static_cast<size_t>(params.n_coeffs), static_cast<size_t>(M));
  for (int k = 0; k < params.n_coeffs; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / M);
    for (int m = 0; m < M; ++m) {
      dct.at(static_cast<size_t>(k), static_cast<size_t>(m)) =
          scale * std::cos(M_PI * k * (2.0 * m + 1.0) / (2.0 * M));
    }
  }

  Matrix out(static_cast<size_t>(params.n_coeffs), n_frames);
  std::vector<std::complex<double>> buf(static_cast<size_t>(params.fft_size));
  std::vector<double> power(static_cast<size_t>(n_bins));
  std::vector<double> log_mel(static_cast<size_t>(M));

  for (size_t f = 0; f < n_frames; ++f) {
    const double* x = rec.samples.data() + f * hop;
    for (size_t i = 0; i < static_cast<size_t>(params.fft_size); ++i) {
      buf[i] = i < window ? x[i] * hann[i] : 0.0;
    }
    fft(buf);
    for (int b = 0; b < n_bins; ++b) power[static_cast<size_t>(b)] = std::norm(buf[static_cast<size_t>(b)]);

    for (int m = 0; m < M; ++m) {
      double e = 0.0;
      const double* w = fb.row(static_cast<size_t>(m));
      for (int b = 0; b < n_bins; ++b) e += w[b] * power[static_cast<size_t>(b)];
      log_mel[static_cast<size_t>(m)] = std::log(std::max(e, params.log_floor));
    }
    for (int k = 0; k < params.n_coeffs; ++k) {
      double c = 0.0;
      const double* d = dct.row(static_cast<size_t>(k));
      for (int m = 0; m < M; ++m) c += d[m] * log_mel[static_cast<size_t>(m)];
      out.at(static_cast<size_t>(k), f) = c;
    }
  }
  return out;
}

std::vector<double> standardize_mfcc(const Matrix& m, int target_frames) {
  if (target_frames < 1) fail(ErrorCode::InvalidArgument, "standardize_mfcc: target_frames must be >= 1");
  const auto target = static_cast<size_t>(target_frames);
  std::vector<double> out(m.rows * target, 0.0);
  const size_t keep = std::min(m.cols, target);
  for (size_t r = 0; r < m.rows; ++r) {
    for (size_t c = 0; c < keep; ++c) out[r * target + c] = m.at(r, c);
  }
  return out;
}

int mfcc_target_frames(const std::vector<int>& frame_counts) {
  if (frame_counts.empty()) fail(ErrorCode::InvalidArgument, "mfcc_target_frames: empty input");
  double sum = 0.0;
  for (int c : frame_counts) sum += c;
  return static_cast<int>(std::llround(sum / static_cast<double>(frame_counts.size())));
}

}  // namespace voicebench
