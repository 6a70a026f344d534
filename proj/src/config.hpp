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

#include <json.hpp>

#include <string>
#include <vector>

#include "bundle.hpp"
#include "features.hpp"
#include "model.hpp"
#include "pipeline.hpp"

namespace voicebench {

struct ExternalDatasetSpec {
  std::string name;
  std::string manifest;
  std::string audio_root;
  std::string embeddings;        // required for embedding cells
  std::string acoustic_vectors;  // optional extractor bypass
  std::string symptom_schema;    // optional; empty = no symptom columns
};

// JSON run configuration for the benchmark matrix.
struct RunConfig {
  // Either train/test manifests, or one manifest split at test_fraction.
  std::string train_manifest;
  std::string test_manifest;
  std::string manifest;
  double test_fraction = 0.33;

  std::string audio_root;
  std::string label_map;         // optional; empty map labels all rows benign
  std::string symptom_schema;    // optional
  std::string embeddings;        // train + holdout embeddings
  std::string acoustic_vectors;  // optional extractor bypass

  std::vector<ExternalDatasetSpec> external;

  std::vector<Algorithm> algorithms{Algorithm::Svm, Algorithm::Mlp, Algorithm::LogReg};
  std::vector<FeatureKind> feature_sets{FeatureKind::Embedding, FeatureKind::Acoustic,
                                        FeatureKind::Mfcc};
  std::vector<Variant> variants{Variant::Voice, Variant::VoiceDemo, Variant::VoiceSymptoms,
                                Variant::VoiceDemoSymptoms};

  nlohmann::json grid_overrides = nlohmann::json::object();
  PipelineConfig pipeline;
  uint64_t seed = 42;
  int cv_folds = 5;
  int bootstrap_resamples = 1000;
  int jobs = 1;
  int timing_repeats = 0;  // > 0 also times every cell over the holdout set

  nlohmann::json to_json() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace voicebench
