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

#include "bundle.hpp"
#include "dataset.hpp"
#include "embeddings.hpp"

namespace voicebench {

// Per-file prediction latency, wall clock (monotonic). Stages:
//   feature_extraction  raw feature computation (for precomputed-embedding
//                       bundles: per-recording frame lookup + mean pooling)
//   predict_only        fitted-pipeline transform + classifier score
//   end_to_end          decode + resample + feature_extraction + predict_only
// Runs are strictly single-threaded so numbers are comparable.
struct StageTimes {
  double end_to_end = 0.0;
  double feature_extraction = 0.0;
  double predict_only = 0.0;
};

struct FileTiming {
  std::string file_id;
  bool ok = true;
  std::string error;
  std::vector<StageTimes> repeats;  // raw values, warm-up excluded
  StageTimes median;
  double score = 0.0;  // prediction from the timed runs (repeat-invariant)
  int label = 0;
};

struct StageSummary {
  double min = 0.0, median = 0.0, p95 = 0.0, max = 0.0;
};

struct TimingReport {
  std::string model_id;
  int repeats = 0;
  std::string cpu;
  StageSummary end_to_end, feature_extraction, predict_only;  // over per-file medians
  std::vector<FileTiming> files;
};

// Times bundle predictions over the dataset's audio files. Demographics and
// symptoms come from the manifest rows when the bundle's variant needs them.
// Embedding bundles require the preloaded embedding set.
TimingReport time_model(const ModelBundle& bundle, const LabeledDataset& ds,
                        const std::string& audio_root, const EmbeddingSet* embeddings,
                        int repeats);

// Delimited text: model_id,file_id,stage,seconds rows (one per repeat),
// followed by '#'-prefixed summary lines.
void write_timing(const std::string& path, const TimingReport& report);

std::string cpu_description();

}  // namespace voicebench
