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

#include <optional>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "dataset.hpp"
#include "embeddings.hpp"
#include "pipeline.hpp"
#include "wav.hpp"

namespace voicebench {

// All feature extraction runs at this rate.
inline constexpr int kPipelineRate = 16000;

struct FeatureSource {
  std::string audio_root;
  // Required for FeatureKind::Embedding.
  const EmbeddingSet* embeddings = nullptr;
  // Optional dim-88 interchange file that bypasses the built-in acoustic
  // extractor (exact-parity runs with an external toolchain).
  const EmbeddingSet* external_acoustic = nullptr;
};

Recording load_recording_16k(const std::string& path);

// Audio block of one recording: MFCC matrix or fixed-width vector.
Matrix mfcc_features(const Recording& rec);
std::vector<double> acoustic_features(const Recording& rec, const FeatureSource& source,
                                      const std::string& id);
std::vector<double> embedding_features(const FeatureSource& source, const std::string& id);

// Demographic/symptom block layout for a variant:
//   demographics: age, sex (female 0, male 1)
//   symptoms: declared symptom columns, then packs_per_day / drinks_per_day
//             when those manifest columns exist
std::vector<std::string> demo_block_names(const LabeledDataset& ds, Variant variant);
std::vector<double> demo_block_values(const PatientRecord& rec, const LabeledDataset& ds,
                                      Variant variant);

// Builds the full training/evaluation input for one benchmark cell.
CellInput build_cell_input(const LabeledDataset& ds, FeatureKind kind, Variant variant,
                           const FeatureSource& source);

std::vector<std::string> mfcc_flat_names(int target_frames);

}  // namespace voicebench
