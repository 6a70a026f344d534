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

#include "acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "error.hpp"
#include "fft.hpp"
#include "mfcc.hpp"
#include "util.hpp"

namespace voicebench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr double kPitchWindowS = 0.040;
constexpr double kPitchFminHz = 60.0;
constexpr double kPitchFmaxHz = 500.0;
constexpr double kVoicingThreshold = 0.45;  // normalized autocorrelation peak
constexpr double kVoicingRmsGate = 1e-5;

constexpr double kSpecWindowS = 0.025;
constexpr double kHopS = 0.010;
constexpr int kSpecFft = 512;
constexpr double kLoudnessFloorDb = -120.0;

const std::array<const char*, kAcousticDim> kNames = {
    // F0 (voiced frames, Hz unless noted)
    "f0_mean_hz", "f0_stddev_hz", "f0_cv", "f0_min_hz", "f0_p20_hz",
    "f0_median_hz", "f0_p80_hz", "f0_max_hz", "f0_range_p20_p80_hz",
    "f0_semitone_mean", "f0_semitone_stddev",
    "f0_rising_slope_mean_hz_s", "f0_rising_slope_stddev_hz_s",
    "f0_falling_slope_mean_hz_s", "f0_falling_slope_stddev_hz_s",
    // Voice quality
    "jitter_local", "jitter_rap", "jitter_ddp",
    "shimmer_local", "shimmer_apq3", "shimmer_db",
    "hnr_mean_db", "hnr_stddev_db", "voiced_peak_autocorr_mean",
    // Harmonic levels
    "h1_h2_db_mean", "h1_h2_db_stddev", "h1_a3_db_mean", "h1_a3_db_stddev",
    // Spectral shape
    "spectral_centroid_hz_mean", "spectral_centroid_hz_stddev", "spectral_centroid_hz_p50",
    "spectral_slope_0_500_mean", "spectral_slope_0_500_stddev", "spectral_slope_0_500_p50",
    "spectral_slope_500_1500_mean", "spectral_slope_500_1500_stddev", "spectral_slope_500_1500_p50",
    "spectral_flux_mean", "spectral_flux_stddev", "spectral_flux_p50",
    "alpha_ratio_db_mean", "alpha_ratio_db_stddev", "alpha_ratio_db_p50",
    "hammarberg_db_mean", "hammarberg_db_stddev", "hammarberg_db_p50",
    "spectral_flux_voiced_mean", "spectral_flux_unvoiced_mean",
    // Cepstral
    "mfcc1_mean", "mfcc1_stddev", "mfcc2_mean", "mfcc2_stddev",
    "mfcc3_mean", "mfcc3_stddev", "mfcc4_mean", "mfcc4_stddev",
    // Loudness (frame RMS, dB)
    "loudness_db_mean", "loudness_db_stddev", "loudness_db_min",
    "loudness_db_p20", "loudness_db_p50", "loudness_db_p80", "loudness_db_max",
    "loudness_db_range_p20_p80", "loudness_db_p95",
    "loudness_rising_slope_mean_db_s", "loudness_rising_slope_stddev_db_s",
    "loudness_falling_slope_mean_db_s", "loudness_falling_slope_stddev_db_s",
    // Band energy fractions
    "band_0_500_frac_mean", "band_0_500_frac_stddev",
    "band_500_1000_frac_mean", "band_500_1000_frac_stddev",
    "band_1000_2000_frac_mean", "band_1000_2000_frac_stddev",
    "band_2000_4000_frac_mean", "band_2000_4000_frac_stddev",
    "band_4000_8000_frac_mean", "band_4000_8000_frac_stddev",
    // Temporal
    "voiced_fraction", "voiced_segments_per_sec",
    "voiced_segment_len_mean_s", "voiced_segment_len_stddev_s",
    "unvoiced_segment_len_mean_s", "unvoiced_segment_len_stddev_s",
    "zcr_mean_hz", "zcr_stddev_hz", "total_duration_s"};

double nan_mean(const std::vector<double>& v) {
  double s = 0.0;
  size_t n = 0;
  for (double x : v) {
    if (!std::isnan(x)) {
      s += x;
      ++n;
    }
  }
  return n ? s / static_cast<double>(n) : kNaN;
}

double nan_stddev(const std::vector<double>& v) {
  const double m = nan_mean(v);
  if (std::isnan(m)) return kNaN;
  double s = 0.0;
  size_t n = 0;
  for (double x : v) {
    if (!std::isnan(x)) {
      s += (x - m) * (x - m);
      ++n;
    }
  }
  return std::sqrt(s / static_cast<double>(n));
}

double nan_percentile(const std::vector<double>& v, double p) {
  std::vector<double> clean;
  for (double x : v) {
    if (!std::isnan(x)) clean.push_back(x);
  }
  return clean.empty() ? kNaN : percentile(clean, p);
}

// Mean/stddev of positive (rising) or negative (falling) consecutive slopes
// of a series sampled every hop seconds. NaN entries break the chain.
struct SlopeStats {
  double rise_mean = kNaN, rise_stddev = kNaN;
  double fall_mean = kNaN, fall_stddev = kNaN;
};

SlopeStats slope_stats(const std::vector<double>& series, double hop_s) {
  std::vector<double> rising, falling;
  for (size_t i = 1; i < series.size(); ++i) {
    if (std::isnan(series[i]) || std::isnan(series[i - 1])) continue;
    const double slope = (series[i] - series[i - 1]) / hop_s;
    if (slope > 0.0) rising.push_back(slope);
    else if (slope < 0.0) falling.push_back(slope);
  }
  SlopeStats s;
  if (!rising.empty()) {
    s.rise_mean = mean_of(rising);
    s.rise_stddev = stddev_of(rising);
  }
  if (!falling.empty()) {
    s.fall_mean = mean_of(falling);
    s.fall_stddev = stddev_of(falling);
  }
  return s;
}

struct PitchFrame {
  bool voiced = false;
  double f0 = kNaN;
  double ac_peak = kNaN;  // normalized autocorrelation at the refined lag
};

// Normalized autocorrelation peak search via FFT + energy prefix sums.
PitchFrame analyze_pitch_frame(const double* x, size_t window, int rate) {
  PitchFrame out;
  double energy = 0.0;
  for (size_t i = 0; i < window; ++i) energy += x[i] * x[i];
  const double rms = std::sqrt(energy / static_cast<double>(window));
  if (rms <= kVoicingRmsGate) return out;

  const auto lag_min = static_cast<size_t>(std::floor(rate / kPitchFmaxHz));
  const auto lag_max = static_cast<size_t>(std::ceil(rate / kPitchFminHz));
  if (lag_max + 2 >= window) return out;

  size_t fft_n = 1;
  while (fft_n < window + lag_max + 1) fft_n <<= 1;
  std::vector<std::complex<double>> buf(fft_n);
  for (size_t i = 0; i < window; ++i) buf[i] = x[i];
  fft(buf);
  for (auto& c : buf) c = std::complex<double>(std::norm(c), 0.0);
  fft(buf, /*inverse=*/true);

  // Prefix sums of x^2 for the lag-dependent normalization terms.
  std::vector<double> prefix(window + 1, 0.0);
  for (size_t i = 0; i < window; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

  auto norm_ac = [&](size_t lag) {
    const double raw = buf[lag].real();
    const double e_head = prefix[window - lag];
    const double e_tail = prefix[window] - prefix[lag];
    const double denom = std::sqrt(e_head * e_tail);
    return denom > 0.0 ? raw / denom : 0.0;
  };

  std::vector<double> ac(lag_max + 2, 0.0);
  for (size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) ac[lag] = norm_ac(lag);

  double global_best = -2.0;
  for (size_t lag = lag_min; lag <= lag_max; ++lag) global_best = std::max(global_best, ac[lag]);
  if (global_best < kVoicingThreshold) return out;

  // A pure periodic signal peaks equally at every multiple of its period;
  // take the smallest-lag local maximum close to the global one to avoid
  // octave-down errors.
  size_t best = 0;
  for (size_t lag = lag_min; lag <= lag_max; ++lag) {
    if (ac[lag] >= ac[lag - 1] && ac[lag] >= ac[lag + 1] && ac[lag] >= 0.9 * global_best &&
        ac[lag] >= kVoicingThreshold) {
      best = lag;
      break;
    }
  }
  if (best == 0) return out;
  const double best_v = ac[best];

  // Parabolic refinement of the lag.
  const double ym = norm_ac(best - 1);
  const double y0 = best_v;
  const double yp = norm_ac(best + 1);
  const double denom = ym - 2.0 * y0 + yp;
  double delta = 0.0;
  if (std::fabs(denom) > 1e-15) delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
  const double lag_refined = static_cast<double>(best) + delta;
  const double peak_refined = y0 - 0.25 * (ym - yp) * delta;

  const double f0 = static_cast<double>(rate) / lag_refined;
  if (f0 < kPitchFminHz * 0.9 || f0 > kPitchFmaxHz * 1.1) return out;
  out.voiced = true;
  out.f0 = f0;
  out.ac_peak = std::min(peak_refined, 1.0 - 1e-12);
  return out;
}

struct PeriodTrack {
  std::vector<double> periods;     // seconds
  std::vector<double> amplitudes;  // refined peak amplitudes
};

// Peak-to-peak period tracking inside [begin, end), seeded with a period
// hint. Relative amplitude gating keeps the track scale-invariant.
PeriodTrack track_periods(const std::vector<double>& x, size_t begin, size_t end,
                          double t0_samples, int rate) {
  PeriodTrack out;
  if (t0_samples <= 2.0) return out;
  const auto span = static_cast<size_t>(std::llround(2.0 * t0_samples));
  if (begin + span >= end) return out;

  double global_max = 0.0;
  for (size_t i = begin; i < end; ++i) global_max = std::max(global_max, std::fabs(x[i]));
  if (global_max <= 0.0) return out;

  auto refine = [&](size_t idx, double& t_out, double& a_out) {
    if (idx == 0 || idx + 1 >= x.size()) {
      t_out = static_cast<double>(idx);
      a_out = x[idx];
      return;
    }
    const double ym = x[idx - 1], y0 = x[idx], yp = x[idx + 1];
    const double denom = ym - 2.0 * y0 + yp;
    double delta = 0.0;
    if (std::fabs(denom) > 0.0) delta = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
    t_out = static_cast<double>(idx) + delta;
    a_out = y0 - 0.25 * (ym - yp) * delta;
  };

  // Anchor on the largest peak within the first two periods.
  size_t anchor = begin;
  for (size_t i = begin; i < begin + span; ++i) {
    if (x[i] > x[anchor]) anchor = i;
  }
  double prev_t, prev_a;
  refine(anchor, prev_t, prev_a);

  std::vector<double> peak_times{prev_t};
  out.amplitudes.push_back(prev_a);
  size_t cursor = anchor;
  while (true) {
    const auto lo = cursor + static_cast<size_t>(std::llround(0.7 * t0_samples));
    const auto hi = cursor + static_cast<size_t>(std::llround(1.35 * t0_samples));
    if (hi >= end) break;
    size_t peak = lo;
    for (size_t i = lo; i <= hi; ++i) {
      if (x[i] > x[peak]) peak = i;
    }
    double t, a;
    refine(peak, t, a);
    if (a < 0.1 * global_max) break;  // lost the waveform
    peak_times.push_back(t);
    out.amplitudes.push_back(a);
    cursor = peak;
  }

  for (size_t i = 1; i < peak_times.size(); ++i) {
    out.periods.push_back((peak_times[i] - peak_times[i - 1]) / rate);
  }
  return out;
}

double db20(double ratio) { return 20.0 * std::log10(std::max(ratio, 1e-12)); }

}  // namespace

const std::array<const char*, kAcousticDim>& acoustic_feature_names() { return kNames; }

std::vector<double> extract_acoustic(const Recording& rec) {
  std::vector<double> out(kAcousticDim, kNaN);
  if (rec.sample_rate <= 0) fail(ErrorCode::InvalidArgument, "extract_acoustic: recording has no sample rate");
  const int rate = rec.sample_rate;
  const size_t n = rec.samples.size();
  out[87] = static_cast<double>(n) / rate;  // total_duration_s

  const auto spec_window = static_cast<size_t>(std::llround(kSpecWindowS * rate));
  const auto pitch_window = static_cast<size_t>(std::llround(kPitchWindowS * rate));
  const auto hop = static_cast<size_t>(std::llround(kHopS * rate));
  if (n < spec_window) return out;  // too short for any frame; duration only

  // ---- Frame-level series -------------------------------------------------
  const size_t n_spec = 1 + (n - spec_window) / hop;
  const size_t n_pitch = n >= pitch_window ? 1 + (n - pitch_window) / hop : 0;

  std::vector<PitchFrame> pitch(n_pitch);
  for (size_t f = 0; f < n_pitch; ++f) {
    pitch[f] = analyze_pitch_frame(rec.samples.data() + f * hop, pitch_window, rate);
  }

  const int n_bins = kSpecFft / 2 + 1;
  const double bin_hz = static_cast<double>(rate) / kSpecFft;
  std::vector<double> hann(spec_window);
  for (size_t i = 0; i < spec_window; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(spec_window));
  }

  std::vector<double> loudness(n_spec), zcr(n_spec);
  std::vector<double> centroid(n_spec, kNaN), slope_lo(n_spec, kNaN), slope_hi(n_spec, kNaN);
  std::vector<double> flux(n_spec, kNaN), alpha(n_spec, kNaN), hammar(n_spec, kNaN);
  std::vector<double> h1h2(n_spec, kNaN), h1a3(n_spec, kNaN);
  std::vector<std::vector<double>> band_frac(5, std::vector<double>(n_spec, kNaN));
  const double band_edges[6] = {0.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0};

  std::vector<double> prev_norm_mag;
  std::vector<std::complex<double>> buf(kSpecFft);
  std::vector<double> mag(static_cast<size_t>(n_bins));

  auto regression_slope = [&](const std::vector<double>& y_db, int b0, int b1) {
    // Least-squares slope of dB magnitude against frequency in Hz.
    const int count = b1 - b0 + 1;
    if (count < 2) return kNaN;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int b = b0; b <= b1; ++b) {
      const double fx = b * bin_hz;
      const double fy = y_db[static_cast<size_t>(b)];
      sx += fx;
      sy += fy;
      sxx += fx * fx;
      sxy += fx * fy;
    }
    const double denom = count * sxx - sx * sx;
    return denom != 0.0 ? (count * sxy - sx * sy) / denom : kNaN;
  };

  for (size_t f = 0; f < n_spec; ++f) {
    const double* x = rec.samples.data() + f * hop;

    double energy = 0.0;
    int crossings = 0;
    for (size_t i = 0; i < spec_window; ++i) {
      energy += x[i] * x[i];
      if (i > 0 && ((x[i - 1] >= 0.0) != (x[i] >= 0.0))) ++crossings;
    }
    const double rms = std::sqrt(energy / static_cast<double>(spec_window));
    loudness[f] = std::max(db20(rms / 1.0), kLoudnessFloorDb);
    zcr[f] = static_cast<double>(crossings) / (2.0 * kSpecWindowS);  // crossings/2 per second

    for (size_t i = 0; i < static_cast<size_t>(kSpecFft); ++i) {
      buf[i] = i < spec_window ? x[i] * hann[i] : 0.0;
    }
    fft(buf);
    double total_power = 0.0;
    for (int b = 0; b < n_bins; ++b) {
      mag[static_cast<size_t>(b)] = std::abs(buf[static_cast<size_t>(b)]);
      total_power += mag[static_cast<size_t>(b)] * mag[static_cast<size_t>(b)];
    }
    if (total_power < 1e-20) {
      prev_norm_mag.clear();  // silence breaks the flux chain
      continue;
    }

    // Centroid and band fractions from the power spectrum.
    double weighted = 0.0;
    for (int b = 0; b < n_bins; ++b) {
      weighted += b * bin_hz * mag[static_cast<size_t>(b)] * mag[static_cast<size_t>(b)];
    }
    centroid[f] = weighted / total_power;
    for (int band = 0; band < 5; ++band) {
      double p = 0.0;
      for (int b = 0; b < n_bins; ++b) {
        const double hz = b * bin_hz;
        if (hz >= band_edges[band] && hz < band_edges[band + 1]) {
          p += mag[static_cast<size_t>(b)] * mag[static_cast<size_t>(b)];
        }
      }
      band_frac[static_cast<size_t>(band)][f] = p / total_power;
    }

    std::vector<double> mag_db(static_cast<size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) mag_db[static_cast<size_t>(b)] = db20(mag[static_cast<size_t>(b)]);
    slope_lo[f] = regression_slope(mag_db, 0, static_cast<int>(500.0 / bin_hz));
    slope_hi[f] = regression_slope(mag_db, static_cast<int>(500.0 / bin_hz),
                                   static_cast<int>(std::min(1500.0, rate / 2.0 - bin_hz) / bin_hz));

    auto band_power = [&](double lo, double hi) {
      double p = 0.0;
      for (int b = 0; b < n_bins; ++b) {
        const double hz = b * bin_hz;
        if (hz >= lo && hz < hi) p += mag[static_cast<size_t>(b)] * mag[static_cast<size_t>(b)];
      }
      return p;
    };
    auto band_peak = [&](double lo, double hi) {
      double p = 0.0;
      for (int b = 0; b < n_bins; ++b) {
        const double hz = b * bin_hz;
        if (hz >= lo && hz < hi) p = std::max(p, mag[static_cast<size_t>(b)]);
      }
      return p;
    };
    alpha[f] = db20(std::sqrt(band_power(1000.0, 5000.0) / std::max(band_power(50.0, 1000.0), 1e-30)));
    hammar[f] = db20(band_peak(0.0, 2000.0) / std::max(band_peak(2000.0, 5000.0), 1e-30));

    // Normalized-magnitude flux against the previous frame.
    std::vector<double> norm_mag(static_cast<size_t>(n_bins));
    double mag_sum = 0.0;
    for (int b = 0; b < n_bins; ++b) mag_sum += mag[static_cast<size_t>(b)];
    for (int b = 0; b < n_bins; ++b) norm_mag[static_cast<size_t>(b)] = mag[static_cast<size_t>(b)] / mag_sum;
    if (!prev_norm_mag.empty()) {
      double fl = 0.0;
      for (int b = 0; b < n_bins; ++b) {
        const double d = norm_mag[static_cast<size_t>(b)] - prev_norm_mag[static_cast<size_t>(b)];
        fl += d * d;
      }
      flux[f] = fl;
    }
    prev_norm_mag = norm_mag;

    // Harmonic levels need the frame's F0; use the nearest pitch frame.
    if (n_pitch > 0) {
      const size_t pf = std::min(f, n_pitch - 1);
      if (pitch[pf].voiced) {
        const double f0 = pitch[pf].f0;
        auto harmonic_peak = [&](double center) {
          return band_peak(center - 0.25 * f0, center + 0.25 * f0);
        };
        const double h1 = harmonic_peak(f0);
        const double h2 = harmonic_peak(2.0 * f0);
        const double a3 = band_peak(2500.0, 3500.0);
        if (h1 > 0.0 && h2 > 0.0) h1h2[f] = db20(h1 / h2);
        if (h1 > 0.0 && a3 > 0.0) h1a3[f] = db20(h1 / a3);
      }
    }
  }

  // ---- F0 statistics ------------------------------------------------------
  std::vector<double> f0_series(n_pitch, kNaN), voiced_f0, ac_peaks, hnr;
  for (size_t f = 0; f < n_pitch; ++f) {
    if (!pitch[f].voiced) continue;
    f0_series[f] = pitch[f].f0;
    voiced_f0.push_back(pitch[f].f0);
    ac_peaks.push_back(pitch[f].ac_peak);
    const double r = std::clamp(pitch[f].ac_peak, 1e-10, 1.0 - 1e-10);
    hnr.push_back(std::clamp(10.0 * std::log10(r / (1.0 - r)), -100.0, 100.0));
  }

  if (!voiced_f0.empty()) {
    out[0] = mean_of(voiced_f0);
    out[1] = stddev_of(voiced_f0);
    out[2] = out[0] != 0.0 ? out[1] / out[0] : kNaN;
    out[3] = *std::min_element(voiced_f0.begin(), voiced_f0.end());
    out[4] = percentile(voiced_f0, 20);
    out[5] = percentile(voiced_f0, 50);
    out[6] = percentile(voiced_f0, 80);
    out[7] = *std::max_element(voiced_f0.begin(), voiced_f0.end());
    out[8] = out[6] - out[4];
    std::vector<double> semitones;
    for (double f0 : voiced_f0) semitones.push_back(12.0 * std::log2(f0 / 27.5));
    out[9] = mean_of(semitones);
    out[10] = stddev_of(semitones);
    const SlopeStats f0_slopes = slope_stats(f0_series, kHopS);
    out[11] = f0_slopes.rise_mean;
    out[12] = f0_slopes.rise_stddev;
    out[13] = f0_slopes.fall_mean;
    out[14] = f0_slopes.fall_stddev;
    out[21] = nan_mean(hnr);
    out[22] = nan_stddev(hnr);
    out[23] = mean_of(ac_peaks);
  }

  // ---- Jitter / shimmer over the longest voiced run -----------------------
  size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
  for (size_t f = 0; f <= n_pitch; ++f) {
    if (f < n_pitch && pitch[f].voiced) {
      if (run_len == 0) run_start = f;
      ++run_len;
    } else {
      if (run_len > best_len) {
        best_len = run_len;
        best_start = run_start;
      }
      run_len = 0;
    }
  }
  if (best_len >= 2 && !voiced_f0.empty()) {
    const double f0_med = percentile(voiced_f0, 50);
    const size_t begin = best_start * hop;
    const size_t end = std::min(n, (best_start + best_len - 1) * hop + pitch_window);
    const PeriodTrack track = track_periods(rec.samples, begin, end, rate / f0_med, rate);
    const auto& P = track.periods;
    const auto& A = track.amplitudes;
    if (P.size() >= 3) {
      const double mean_p = mean_of(P);
      double d_abs = 0.0;
      for (size_t i = 1; i < P.size(); ++i) d_abs += std::fabs(P[i] - P[i - 1]);
      out[15] = d_abs / static_cast<double>(P.size() - 1) / mean_p;  // jitter_local

      double rap = 0.0;
      for (size_t i = 1; i + 1 < P.size(); ++i) {
        rap += std::fabs(P[i] - (P[i - 1] + P[i] + P[i + 1]) / 3.0);
      }
      out[16] = rap / static_cast<double>(P.size() - 2) / mean_p;  // jitter_rap

      double ddp = 0.0;
      for (size_t i = 1; i + 1 < P.size(); ++i) {
        ddp += std::fabs((P[i + 1] - P[i]) - (P[i] - P[i - 1]));
      }
      out[17] = ddp / static_cast<double>(P.size() - 2) / mean_p;  // jitter_ddp
    }
    if (A.size() >= 3) {
      const double mean_a = mean_of(A);
      double s_abs = 0.0, s_db = 0.0;
      for (size_t i = 1; i < A.size(); ++i) {
        s_abs += std::fabs(A[i] - A[i - 1]);
        s_db += std::fabs(db20(std::fabs(A[i] / A[i - 1])));
      }
      out[18] = s_abs / static_cast<double>(A.size() - 1) / mean_a;  // shimmer_local
      out[20] = s_db / static_cast<double>(A.size() - 1);            // shimmer_db

      double apq3 = 0.0;
      for (size_t i = 1; i + 1 < A.size(); ++i) {
        apq3 += std::fabs(A[i] - (A[i - 1] + A[i] + A[i + 1]) / 3.0);
      }
      out[19] = apq3 / static_cast<double>(A.size() - 2) / mean_a;  // shimmer_apq3
    }
  }

  // ---- Harmonic levels ----------------------------------------------------
  out[24] = nan_mean(h1h2);
  out[25] = nan_stddev(h1h2);
  out[26] = nan_mean(h1a3);
  out[27] = nan_stddev(h1a3);

  // ---- Spectral shape -----------------------------------------------------
  const struct {
    const std::vector<double>* series;
    int base;
  } spectral_slots[] = {
      {&centroid, 28}, {&slope_lo, 31}, {&slope_hi, 34},
      {&flux, 37},     {&alpha, 40},    {&hammar, 43},
  };
  for (const auto& s : spectral_slots) {
    out[static_cast<size_t>(s.base)] = nan_mean(*s.series);
    out[static_cast<size_t>(s.base) + 1] = nan_stddev(*s.series);
    out[static_cast<size_t>(s.base) + 2] = nan_percentile(*s.series, 50);
  }

  std::vector<double> flux_voiced, flux_unvoiced;
  for (size_t f = 0; f < n_spec; ++f) {
    if (std::isnan(flux[f])) continue;
    const size_t pf = n_pitch > 0 ? std::min(f, n_pitch - 1) : 0;
    const bool voiced = n_pitch > 0 && pitch[pf].voiced;
    (voiced ? flux_voiced : flux_unvoiced).push_back(flux[f]);
  }
  out[46] = flux_voiced.empty() ? kNaN : mean_of(flux_voiced);
  out[47] = flux_unvoiced.empty() ? kNaN : mean_of(flux_unvoiced);

  // ---- Cepstral (coefficients 1..4 of the shared MFCC front end) ----------
  if (n >= spec_window) {
    MfccParams mp;
    mp.n_coeffs = 5;
    mp.fmax = std::min(8000.0, rate / 2.0);
    const Matrix cc = extract_mfcc(rec, mp);
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> row(cc.row(static_cast<size_t>(k)), cc.row(static_cast<size_t>(k)) + cc.cols);
      out[static_cast<size_t>(48 + (k - 1) * 2)] = mean_of(row);
      out[static_cast<size_t>(48 + (k - 1) * 2 + 1)] = stddev_of(row);
    }
  }

  // ---- Loudness -----------------------------------------------------------
  out[56] = mean_of(loudness);
  out[57] = stddev_of(loudness);
  out[58] = *std::min_element(loudness.begin(), loudness.end());
  out[59] = percentile(loudness, 20);
  out[60] = percentile(loudness, 50);
  out[61] = percentile(loudness, 80);
  out[62] = *std::max_element(loudness.begin(), loudness.end());
  out[63] = out[61] - out[59];
  out[64] = percentile(loudness, 95);
  const SlopeStats loud_slopes = slope_stats(loudness, kHopS);
  out[65] = loud_slopes.rise_mean;
  out[66] = loud_slopes.rise_stddev;
  out[67] = loud_slopes.fall_mean;
  out[68] = loud_slopes.fall_stddev;

  // ---- Band energies --------------------------------------------------------
  for (int band = 0; band < 5; ++band) {
    out[static_cast<size_t>(69 + band * 2)] = nan_mean(band_frac[static_cast<size_t>(band)]);
    out[static_cast<size_t>(69 + band * 2 + 1)] = nan_stddev(band_frac[static_cast<size_t>(band)]);
  }

  // ---- Temporal -------------------------------------------------------------
  size_t voiced_frames = 0;
  std::vector<double> voiced_lens, unvoiced_lens;
  size_t cur_len = 0;
  bool cur_voiced = false;
  for (size_t f = 0; f <= n_pitch; ++f) {
    const bool v = f < n_pitch && pitch[f].voiced;
    if (f < n_pitch && v) ++voiced_frames;
    if (f == 0) {
      cur_voiced = v;
      cur_len = 1;
      continue;
    }
    if (f < n_pitch && v == cur_voiced) {
      ++cur_len;
      continue;
    }
    (cur_voiced ? voiced_lens : unvoiced_lens).push_back(static_cast<double>(cur_len) * kHopS);
    cur_voiced = v;
    cur_len = 1;
  }
  out[79] = n_pitch > 0 ? static_cast<double>(voiced_frames) / static_cast<double>(n_pitch) : 0.0;
  out[80] = out[87] > 0.0 ? static_cast<double>(voiced_lens.size()) / out[87] : kNaN;
  out[81] = voiced_lens.empty() ? kNaN : mean_of(voiced_lens);
  out[82] = voiced_lens.empty() ? kNaN : stddev_of(voiced_lens);
  out[83] = unvoiced_lens.empty() ? kNaN : mean_of(unvoiced_lens);
  out[84] = unvoiced_lens.empty() ? kNaN : stddev_of(unvoiced_lens);
  out[85] = mean_of(zcr);
  out[86] = stddev_of(zcr);

  return out;
}

}  // namespace voicebench
