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

#include <string>

#include "dataset.hpp"
#include "wav.hpp"

namespace voicebench::testsupport {

// Sustained-vowel-like signal: harmonic stack with per-cycle period
// perturbation (jitter analog), per-cycle amplitude modulation (shimmer
// analog), adjustable harmonic rolloff (spectral slope) and additive noise.
struct VowelParams {
  double f0_hz = 150.0;
  double jitter = 0.01;         // per-cycle period sd, fraction of the period
  double shimmer = 0.05;        // per-cycle amplitude sd, fraction
  double slope_db_oct = -12.0;  // harmonic amplitude rolloff
  double noise_level = 0.01;    // additive Gaussian noise (breathiness)
  double seconds = 3.0;
  int sample_rate = 16000;
};

Recording synth_vowel(const VowelParams& params, uint64_t seed);

// A complete on-disk corpus: WAV files, manifest.csv, label_map.txt,
// schema.json (two binary symptom columns) and embeddings.csv (512-dim
// frame vectors deterministically derived from each recording's spectrum).
//
// Malignant rows get a jitter_factor-times jitter analog, a shifted spectral
// slope and extra noise; their ages skew older and heavily male, mirroring
// the demographic pattern of the clinical datasets.
struct SynthCorpusSpec {
  int n = 600;
  double malignant_fraction = 0.05;
  double benign_jitter = 0.010;
  double malignant_jitter_factor = 1.3;
  double benign_slope_db_oct = -13.0;
  double malignant_slope_db_oct = -8.0;
  double benign_noise = 0.005;
  double malignant_noise = 0.02;
  double seconds = 3.0;
  bool with_embeddings = true;
  bool with_symptoms = true;
};

struct SynthCorpus {
  std::string dir;
  std::string manifest;
  std::string label_map;
  std::string schema;      // empty when with_symptoms is false
  std::string embeddings;  // empty when with_embeddings is false
};

SynthCorpus write_synth_corpus(const std::string& dir, const SynthCorpusSpec& spec, uint64_t seed);

}  // namespace voicebench::testsupport
