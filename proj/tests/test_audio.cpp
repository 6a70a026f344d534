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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "error.hpp"
#include "fft.hpp"
#include "resample.hpp"
#include "util.hpp"
#include "wav.hpp"

using namespace voicebench;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Recording make_tone(double freq, double seconds, int rate, double amplitude = 0.5) {
  Recording rec;
  rec.sample_rate = rate;
  const auto n = static_cast<size_t>(std::llround(seconds * rate));
  rec.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    rec.samples[i] = amplitude * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / rate);
  }
  return rec;
}

// Writes a WAV with arbitrary format parameters for decoder edge cases.
void write_raw_wav(const std::string& path, int rate, int channels, int bits,
                   uint16_t format_tag, const std::vector<uint8_t>& payload) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](uint32_t v) { out.put(char(v)).put(char(v >> 8)).put(char(v >> 16)).put(char(v >> 24)); };
  auto u16 = [&](uint16_t v) { out.put(char(v)).put(char(v >> 8)); };
  out.write("RIFF", 4);
  u32(static_cast<uint32_t>(36 + payload.size()));
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(format_tag);
  u16(static_cast<uint16_t>(channels));
  u32(static_cast<uint32_t>(rate));
  u32(static_cast<uint32_t>(rate * channels * bits / 8));
  u16(static_cast<uint16_t>(channels * bits / 8));
  u16(static_cast<uint16_t>(bits));
  out.write("data", 4);
  u32(static_cast<uint32_t>(payload.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
}

double tone_rms(const Recording& rec) {
  double s = 0.0;
  for (double v : rec.samples) s += v * v;
  return std::sqrt(s / static_cast<double>(rec.samples.size()));
}

}  // namespace

TEST_CASE("wav round trip: 3 s at 44100 Hz") {
  const std::string path = temp_path("vb_tone.wav");
  write_wav(path, make_tone(440.0, 3.0, 44100));
  const Recording rec = decode_wav(path);
  CHECK(rec.samples.size() == 132300);
  CHECK(rec.sample_rate == 44100);
  CHECK(rec.duration() == doctest::Approx(3.0));

  const WavInfo info = wav_info(path);
  CHECK(info.frames == 132300);
  CHECK(info.sample_rate == 44100);
  CHECK(info.duration == doctest::Approx(3.0));
  std::remove(path.c_str());
}

TEST_CASE("stereo channels x and -x cancel to silence") {
  // Interleave int16 samples v, -v.
  std::vector<uint8_t> payload;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = static_cast<int16_t>(rng.next_below(65536)) ;
    const auto neg = static_cast<int16_t>(-v);
    payload.push_back(static_cast<uint8_t>(v & 0xff));
    payload.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    payload.push_back(static_cast<uint8_t>(neg & 0xff));
    payload.push_back(static_cast<uint8_t>((neg >> 8) & 0xff));
  }
  const std::string path = temp_path("vb_stereo.wav");
  write_raw_wav(path, 16000, 2, 16, 1, payload);
  const Recording rec = decode_wav(path);
  REQUIRE(rec.samples.size() == 1000);
  for (double v : rec.samples) CHECK(std::fabs(v) < 1e-4);  // -32768 has no exact negation
  std::remove(path.c_str());
}

TEST_CASE("wav decoder error paths") {
  SUBCASE("not a wav") {
    const std::string path = temp_path("vb_not_wav.bin");
    std::ofstream(path) << "definitely not audio at all...";
    CHECK_THROWS_WITH_AS(decode_wav(path), doctest::Contains("RIFF"), Error);
    std::remove(path.c_str());
  }
  SUBCASE("compressed codec is unsupported") {
    const std::string path = temp_path("vb_ulaw.wav");
    write_raw_wav(path, 8000, 1, 8, /*format_tag=*/7, std::vector<uint8_t>(64, 0));
    try {
      decode_wav(path);
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unsupported);
    }
    std::remove(path.c_str());
  }
  SUBCASE("truncated data chunk") {
    const std::string path = temp_path("vb_trunc.wav");
    write_wav(path, make_tone(100.0, 0.1, 8000));
    // Chop the last 100 bytes off.
    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 100);
    CHECK_THROWS_WITH_AS(decode_wav(path), doctest::Contains("truncated"), Error);
    std::remove(path.c_str());
  }
}

TEST_CASE("wav bit depths decode to matching waveforms") {
  // 24-bit payload for a short ramp, compared against the 16-bit writer.
  const int n = 64;
  std::vector<uint8_t> payload24, payload8;
  for (int i = 0; i < n; ++i) {
    const double v = std::sin(2.0 * M_PI * i / n) * 0.5;
    const auto q24 = static_cast<int32_t>(std::lround(v * 8388607.0));
    payload24.push_back(static_cast<uint8_t>(q24 & 0xff));
    payload24.push_back(static_cast<uint8_t>((q24 >> 8) & 0xff));
    payload24.push_back(static_cast<uint8_t>((q24 >> 16) & 0xff));
    payload8.push_back(static_cast<uint8_t>(std::lround(v * 127.0) + 128));
  }
  const std::string p24 = temp_path("vb_24.wav");
  const std::string p8 = temp_path("vb_8.wav");
  write_raw_wav(p24, 16000, 1, 24, 1, payload24);
  write_raw_wav(p8, 16000, 1, 8, 1, payload8);
  const Recording r24 = decode_wav(p24);
  const Recording r8 = decode_wav(p8);
  for (int i = 0; i < n; ++i) {
    const double expect = std::sin(2.0 * M_PI * i / n) * 0.5;
    CHECK(r24.samples[static_cast<size_t>(i)] == doctest::Approx(expect).epsilon(1e-5));
    CHECK(r8.samples[static_cast<size_t>(i)] == doctest::Approx(expect).scale(1.0).epsilon(0.02));
  }
  std::remove(p24.c_str());
  std::remove(p8.c_str());
}

TEST_CASE("float32 wav decodes exactly") {
  std::vector<uint8_t> payload;
  std::vector<float> values{0.0f, 0.25f, -0.5f, 1.0f, -1.0f, 0.125f};
  for (float f : values) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    payload.push_back(static_cast<uint8_t>(bits & 0xff));
    payload.push_back(static_cast<uint8_t>((bits >> 8) & 0xff));
    payload.push_back(static_cast<uint8_t>((bits >> 16) & 0xff));
    payload.push_back(static_cast<uint8_t>((bits >> 24) & 0xff));
  }
  const std::string path = temp_path("vb_f32.wav");
  write_raw_wav(path, 50000, 1, 32, 3, payload);
  const Recording rec = decode_wav(path);
  REQUIRE(rec.samples.size() == values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    CHECK(rec.samples[i] == doctest::Approx(static_cast<double>(values[i])));
  }
  std::remove(path.c_str());
}

TEST_CASE("1.3 s file at 50 kHz reports its duration") {
  const std::string path = temp_path("vb_svd_like.wav");
  write_wav(path, make_tone(200.0, 1.3, 50000));
  const Recording rec = decode_wav(path);
  CHECK(std::fabs(rec.duration() - 1.3) <= 1.0 / 50000.0);
  std::remove(path.c_str());
}

TEST_CASE("resample length and identity") {
  SUBCASE("3 s at 44100 -> 48000 samples at 16000") {
    const Recording in = make_tone(440.0, 3.0, 44100);
    const Recording out = resample(in, 16000);
    CHECK(out.samples.size() == 48000);
    CHECK(out.sample_rate == 16000);
  }
  SUBCASE("equal rates are bitwise identity") {
    const Recording in = make_tone(317.0, 0.5, 16000);
    const Recording out = resample(in, 16000);
    REQUIRE(out.samples.size() == in.samples.size());
    for (size_t i = 0; i < in.samples.size(); ++i) CHECK(out.samples[i] == in.samples[i]);
  }
  SUBCASE("invalid target rate") {
    CHECK_THROWS_AS(resample(make_tone(100, 0.1, 8000), 0), Error);
  }
}

TEST_CASE("resampled tone stays in place and out-of-band energy is rejected") {
  const Recording in = make_tone(440.0, 2.0, 50000);
  const Recording out = resample(in, 16000);

  const size_t fft_n = 16384;
  // Analyze a Hann-windowed cut from the middle of the signal; a rectangular
  // window would leak more than the -60 dB floor being verified.
  std::vector<double> cut(fft_n);
  for (size_t i = 0; i < fft_n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / fft_n);
    cut[i] = w * out.samples[4096 + i];
  }
  const std::vector<double> mag = real_fft_magnitude(cut.data(), fft_n, fft_n);
  const double bin_hz = 16000.0 / static_cast<double>(fft_n);

  size_t peak = 0;
  for (size_t i = 1; i < mag.size(); ++i) {
    if (mag[i] > mag[peak]) peak = i;
  }
  CHECK(std::fabs(static_cast<double>(peak) * bin_hz - 440.0) <= 2.0);

  // Away from the tone (and its leakage skirt), everything must sit below
  // -60 dB relative to the peak.
  const double limit = mag[peak] * std::pow(10.0, -60.0 / 20.0);
  for (size_t i = 0; i < mag.size(); ++i) {
    const double hz = static_cast<double>(i) * bin_hz;
    if (std::fabs(hz - 440.0) < 50.0) continue;
    CHECK(mag[i] < limit);
  }
}

TEST_CASE("tone energy is preserved across resampling (passband)") {
  Rng rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const int src_rate = trial % 2 ? 44100 : 50000;
    const int dst_rate = 16000;
    const double max_f = 0.75 * 0.5 * std::min(src_rate, dst_rate);
    const double freq = 60.0 + rng.next_double() * (max_f - 60.0);
    const Recording in = make_tone(freq, 1.0, src_rate);
    const Recording out = resample(in, dst_rate);
    // Compare RMS over the interior (skip filter edges).
    Recording in_mid{std::vector<double>(in.samples.begin() + 2000, in.samples.end() - 2000), src_rate};
    Recording out_mid{std::vector<double>(out.samples.begin() + 1000, out.samples.end() - 1000), dst_rate};
    const double db = 20.0 * std::log10(tone_rms(out_mid) / tone_rms(in_mid));
    CHECK(std::fabs(db) < 1.0);
  }
}

TEST_CASE("round-trip resampling preserves duration within 2 sample periods") {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const int r1 = 8000 + static_cast<int>(rng.next_below(42001));
    const int r2 = 8000 + static_cast<int>(rng.next_below(42001));
    const double seconds = 0.2 + rng.next_double();
    const Recording x = make_tone(200.0, seconds, r1);
    const Recording back = resample(resample(x, r2), r1);
    const double dt = std::fabs(back.duration() - x.duration());
    CHECK(dt <= 2.0 / std::min(r1, r2));
  }
}
