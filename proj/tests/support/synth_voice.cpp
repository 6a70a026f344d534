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

#include "synth_voice.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "csv.hpp"
#include "embeddings.hpp"
#include "fft.hpp"
#include "util.hpp"

namespace voicebench::testsupport {

namespace fs = std::filesystem;

Recording synth_vowel(const VowelParams& params, uint64_t seed) {
  Rng rng(seed);
  Recording rec;
  rec.sample_rate = params.sample_rate;
  const auto n = static_cast<size_t>(std::llround(params.seconds * params.sample_rate));
  rec.samples.resize(n);

  const int n_harmonics = std::max(
      1, static_cast<int>(std::floor(0.45 * params.sample_rate / params.f0_hz)));
  std::vector<double> harmonic_amp(static_cast<size_t>(n_harmonics));
  for (int k = 1; k <= n_harmonics; ++k) {
    harmonic_amp[static_cast<size_t>(k - 1)] =
        std::pow(10.0, params.slope_db_oct * std::log2(static_cast<double>(k)) / 20.0);
  }

  double phase = 0.0;
  double cycle_f0 = params.f0_hz;
  double cycle_amp = 1.0;
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = 1; k <= n_harmonics; ++k) {
      v += harmonic_amp[static_cast<size_t>(k - 1)] * std::sin(k * phase);
    }
    v = cycle_amp * v + params.noise_level * rng.next_normal();
    rec.samples[i] = v;
    peak = std::max(peak, std::fabs(v));

    phase += 2.0 * M_PI * cycle_f0 / params.sample_rate;
    if (phase >= 2.0 * M_PI) {
      phase -= 2.0 * M_PI;
      cycle_f0 = params.f0_hz * (1.0 + params.jitter * rng.next_normal());
      cycle_f0 = std::clamp(cycle_f0, params.f0_hz * 0.7, params.f0_hz * 1.3);
      cycle_amp = std::max(0.2, 1.0 + params.shimmer * rng.next_normal());
    }
  }
  if (peak > 0.0) {
    for (double& v : rec.samples) v *= 0.5 / peak;
  }
  return rec;
}

namespace {

// Frame vectors mimicking an offline speech-model export: 32 log band
// energies per 25 ms frame (20 ms hop), linearly mixed into 512 dimensions by
// a fixed random matrix.
Matrix frame_embeddings(const Recording& rec) {
  constexpr int kDim = 512;
  constexpr int kBands = 32;
  constexpr size_t kWindow = 400;
  constexpr size_t kHop = 320;

  static std::vector<double> mix;  // kDim x kBands, fixed across the corpus
  if (mix.empty()) {
    Rng rng(0xe5bedull);
    mix.resize(kDim * kBands);
    for (double& v : mix) v = rng.next_normal() / std::sqrt(static_cast<double>(kBands));
  }

  const size_t n = rec.samples.size();
  const size_t frames = n >= kWindow ? 1 + (n - kWindow) / kHop : 0;
  Matrix out(frames, kDim);
  std::vector<double> bands(kBands);
  for (size_t f = 0; f < frames; ++f) {
    const std::vector<double> mag = real_fft_magnitude(rec.samples.data() + f * kHop, kWindow, 512);
    const size_t per_band = mag.size() / kBands;
    for (int b = 0; b < kBands; ++b) {
      double e = 0.0;
      for (size_t i = 0; i < per_band; ++i) {
        const double m = mag[static_cast<size_t>(b) * per_band + i];
        e += m * m;
      }
      bands[static_cast<size_t>(b)] = std::log(e + 1e-10);
    }
    for (int d = 0; d < kDim; ++d) {
      double v = 0.0;
      for (int b = 0; b < kBands; ++b) {
        v += mix[static_cast<size_t>(d) * kBands + static_cast<size_t>(b)] *
             bands[static_cast<size_t>(b)];
      }
      out.at(f, static_cast<size_t>(d)) = v;
    }
  }
  return out;
}

}  // namespace

SynthCorpus write_synth_corpus(const std::string& dir, const SynthCorpusSpec& spec, uint64_t seed) {
  fs::create_directories(fs::path(dir) / "audio");
  Rng rng(seed);

  SynthCorpus corpus;
  corpus.dir = dir;
  corpus.manifest = (fs::path(dir) / "manifest.csv").string();
  corpus.label_map = (fs::path(dir) / "label_map.txt").string();

  std::ofstream(corpus.label_map) << "[malignant]\nLaryngeal cancer\nDysplasia\n";
  if (spec.with_symptoms) {
    corpus.schema = (fs::path(dir) / "schema.json").string();
    std::ofstream(corpus.schema) << R"({"symptom_columns": ["hoarseness", "pain"]})";
  }

  CsvTable manifest;
  manifest.header = {"id", "audio_path", "pathology", "sex", "age", "packs_per_day",
                     "drinks_per_day"};
  if (spec.with_symptoms) {
    manifest.header.push_back("hoarseness");
    manifest.header.push_back("pain");
  }

  EmbeddingSet embeddings;
  embeddings.dim = 512;

  const int n_malignant = static_cast<int>(std::llround(spec.n * spec.malignant_fraction));
  for (int i = 0; i < spec.n; ++i) {
    const bool malignant = i < n_malignant;
    const std::string id = "p" + std::to_string(i);
    const std::string wav = "audio/" + id + ".wav";

    VowelParams vp;
    vp.seconds = spec.seconds;
    vp.f0_hz = 120.0 + 80.0 * rng.next_double();
    vp.jitter = spec.benign_jitter * (0.8 + 0.4 * rng.next_double());
    vp.slope_db_oct = spec.benign_slope_db_oct + 1.5 * rng.next_normal();
    vp.noise_level = spec.benign_noise * (0.5 + rng.next_double());
    vp.shimmer = 0.04 + 0.03 * rng.next_double();
    int age = 30 + static_cast<int>(rng.next_below(40));
    bool male = rng.next_double() < 0.40;
    if (malignant) {
      vp.jitter *= spec.malignant_jitter_factor;
      vp.slope_db_oct = spec.malignant_slope_db_oct + 1.5 * rng.next_normal();
      vp.noise_level = spec.malignant_noise * (0.5 + rng.next_double());
      age = 55 + static_cast<int>(rng.next_below(30));
      male = rng.next_double() < 0.90;
    }

    const Recording rec = synth_vowel(vp, seed ^ (0x9e3779b9ull * static_cast<uint64_t>(i + 1)));
    write_wav((fs::path(dir) / wav).string(), rec);
    if (spec.with_embeddings) embeddings.by_id.emplace(id, frame_embeddings(rec));

    std::vector<std::string> row{
        id,
        wav,
        malignant ? (rng.next_double() < 0.8 ? "Laryngeal cancer" : "Dysplasia")
                  : (rng.next_double() < 0.5 ? "Polyp" : "Vocal palsy"),
        male ? "male" : "female",
        std::to_string(age),
        rng.next_double() < 0.4 ? std::to_string(static_cast<int>(rng.next_below(3))) : "",
        rng.next_double() < 0.4 ? std::to_string(static_cast<int>(rng.next_below(4))) : "",
    };
    if (spec.with_symptoms) {
      // Symptoms correlate with the class but carry noise.
      const double p_sym = malignant ? 0.8 : 0.25;
      row.push_back(rng.next_double() < p_sym ? "1" : "0");
      row.push_back(rng.next_double() < p_sym ? "1" : "0");
    }
    manifest.rows.push_back(std::move(row));
  }
  write_csv(corpus.manifest, manifest);
  if (spec.with_embeddings) {
    corpus.embeddings = (fs::path(dir) / "embeddings.csv").string();
    write_embeddings(corpus.embeddings, embeddings);
  }
  return corpus;
}

}  // namespace voicebench::testsupport
