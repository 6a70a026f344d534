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
#include <vector>

#include "features.hpp"
#include "preprocess.hpp"

namespace voicebench {

struct PipelineConfig {
  TreeParams tree;
  int smote_k = 5;
  // false: refit feature selection inside every CV fold (no leakage).
  // true: fit once on the full training set (comparison knob).
  bool select_scope_global = false;
};

// Raw per-cell training inputs. The audio block is either fixed-width
// vectors (acoustic, pooled embeddings) or per-recording MFCC matrices whose
// frame counts vary; standardization happens inside the fitted pipeline so
// the target frame count can be learned from training rows only.
struct CellInput {
  FeatureKind feature_set = FeatureKind::Acoustic;
  std::vector<Matrix> mfcc;  // used when feature_set == Mfcc
  Matrix audio;              // used otherwise
  std::vector<std::string> audio_names;
  Matrix demo;  // zero columns for the voice-only variant
  std::vector<std::string> demo_names;
  std::vector<int> y;

  size_t n_rows() const { return feature_set == FeatureKind::Mfcc ? mfcc.size() : audio.rows; }
};

// Audio branch: [standardize] -> mean-impute -> z-score -> tree-select.
// Demographic/symptom branch: zero-impute -> z-score. Assembled input is
// [audio block | demo block].
struct FittedPipeline {
  FeatureKind feature_set = FeatureKind::Acoustic;
  int target_frames = 0;  // mfcc only
  ImputerState audio_imputer;
  ScalerState audio_scaler;
  SelectorState selector;
  bool has_demo = false;
  ImputerState demo_imputer;
  ScalerState demo_scaler;

  size_t output_dim() const {
    return selector.selected.size() + (has_demo ? demo_imputer.fill.size() : 0);
  }
};

FittedPipeline fit_pipeline(const CellInput& input, const std::vector<size_t>& train_rows,
                            const PipelineConfig& config);

Matrix apply_pipeline(const FittedPipeline& pipeline, const CellInput& input,
                      const std::vector<size_t>& rows);

std::vector<int> take_labels(const std::vector<int>& y, const std::vector<size_t>& rows);

}  // namespace voicebench
