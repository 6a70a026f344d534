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

#include "pipeline.hpp"

#include "error.hpp"
#include "mfcc.hpp"

namespace voicebench {

namespace {

// Raw (pre-imputation) audio matrix for the given rows.
Matrix raw_audio(const CellInput& input, const std::vector<size_t>& rows, int target_frames) {
  if (input.feature_set != FeatureKind::Mfcc) return input.audio.take_rows(rows);
  Matrix out(rows.size(), 20 * static_cast<size_t>(target_frames));
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double> flat = standardize_mfcc(input.mfcc[rows[i]], target_frames);
    std::copy(flat.begin(), flat.end(), out.row(i));
  }
  return out;
}

}  // namespace

std::vector<int> take_labels(const std::vector<int>& y, const std::vector<size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(y[r]);
  return out;
}

FittedPipeline fit_pipeline(const CellInput& input, const std::vector<size_t>& train_rows,
                            const PipelineConfig& config) {
  if (train_rows.empty()) fail(ErrorCode::InvalidArgument, "fit_pipeline: no training rows");
  FittedPipeline p;
  p.feature_set = input.feature_set;

  if (input.feature_set == FeatureKind::Mfcc) {
    std::vector<int> frame_counts;
    for (size_t r : train_rows) frame_counts.push_back(static_cast<int>(input.mfcc[r].cols));
    p.target_frames = mfcc_target_frames(frame_counts);
  }

  Matrix audio = raw_audio(input, train_rows, p.target_frames);
  p.audio_imputer = fit_imputer(audio, ImputeStrategy::Mean, input.audio_names, 0.0);
  apply_imputer(p.audio_imputer, audio);
  p.audio_scaler = fit_scaler(audio);
  apply_scaler(p.audio_scaler, audio);
  p.selector = fit_tree_selector(audio, take_labels(input.y, train_rows), config.tree);

  p.has_demo = input.demo.cols > 0;
  if (p.has_demo) {
    Matrix demo = input.demo.take_rows(train_rows);
    p.demo_imputer = fit_imputer(demo, ImputeStrategy::Zero);
    apply_imputer(p.demo_imputer, demo);
    p.demo_scaler = fit_scaler(demo);
  }
  return p;
}

Matrix apply_pipeline(const FittedPipeline& pipeline, const CellInput& input,
                      const std::vector<size_t>& rows) {
  Matrix audio = raw_audio(input, rows, pipeline.target_frames);
  apply_imputer(pipeline.audio_imputer, audio);
  apply_scaler(pipeline.audio_scaler, audio);
  Matrix selected = apply_selector(pipeline.selector, audio);

  if (!pipeline.has_demo) return selected;
  Matrix demo = input.demo.take_rows(rows);
  apply_imputer(pipeline.demo_imputer, demo);
  apply_scaler(pipeline.demo_scaler, demo);
  return hconcat(selected, demo);
}

}  // namespace voicebench
