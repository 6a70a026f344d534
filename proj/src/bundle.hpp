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

#include <memory>
#include <string>
#include <vector>

#include "cv.hpp"
#include "model.hpp"
#include "pipeline.hpp"

namespace voicebench {

enum class Variant { Voice, VoiceDemo, VoiceSymptoms, VoiceDemoSymptoms };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
bool variant_uses_demographics(Variant v);
bool variant_uses_symptoms(Variant v);

inline constexpr int kBundleSchemaVersion = 1;

// Everything needed to reproduce training-time predictions: the fitted
// preprocessing states, the winning hyperparameters, the classifier and the
// seeds. Serialized as two header lines (magic/schema, crc32 of the body)
// followed by a pretty-printed JSON body with base64 numeric blocks, so
// bundles diff cleanly and numeric state round-trips bit-exактly.
struct ModelBundle {
  int schema_version = kBundleSchemaVersion;
  Algorithm algorithm = Algorithm::LogReg;
  FeatureKind feature_set = FeatureKind::Acoustic;
  Variant variant = Variant::Voice;
  nlohmann::json winning_params;
  FittedPipeline pipeline;
  std::vector<std::string> demo_names;  // demographic/symptom columns, in order
  std::unique_ptr<Model> model;
  uint64_t seed = 0;
  std::vector<std::string> deviation_notes;
  std::string model_id;  // "<algorithm>_<features>_<variant>"
};

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

struct BundlePredictions {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Applies the bundle's fitted pipeline and classifier to raw cell inputs.
BundlePredictions bundle_predict(const ModelBundle& bundle, const CellInput& input,
                                 const std::vector<size_t>& rows);

std::string make_model_id(Algorithm a, FeatureKind f, Variant v);

}  // namespace voicebench
