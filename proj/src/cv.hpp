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

#include "model.hpp"
#include "pipeline.hpp"

namespace voicebench {

// Fold id per sample; per-fold class counts differ by at most 1 within each
// class. Deterministic given the seed.
std::vector<int> stratified_kfold(const std::vector<int>& y, int k, uint64_t seed);

// One hyperparameter combination. Cells that only exist to mirror the
// published grid but are unsupported (Newton path with l1/elasticnet, MLP
// lbfgs) carry valid = false and never win.
struct GridCell {
  Algorithm algorithm = Algorithm::LogReg;
  LogRegParams logreg;
  SvmParams svm;
  MlpParams mlp;
  bool valid = true;
  std::string invalid_reason;
  nlohmann::json params;  // human-readable description, Table-3 keys
};

// Built-in grids mirroring the published table; enumeration is lexicographic
// with the first-listed hyperparameter outermost, which pins tie-breaking.
std::vector<GridCell> default_grid(Algorithm algorithm);

// Override file: {"svm": {"C": [...], ...}, "mlp": {...}, "logreg": {...}}
// with Table-3 keys; omitted keys keep their defaults.
std::vector<GridCell> grid_from_json(Algorithm algorithm, const nlohmann::json& overrides);

std::unique_ptr<Model> fit_cell(const GridCell& cell, const Matrix& X, const std::vector<int>& y,
                                const ClassWeights& weights, int smote_k, uint64_t seed);

struct CvCellResult {
  nlohmann::json params;
  bool valid = true;
  std::string invalid_reason;
  std::vector<double> fold_scores;
  std::vector<bool> fold_flagged;  // validation fold missing a class
  double mean_score = 0.0;
};

struct CvResult {
  std::vector<CvCellResult> cells;
  int winner = -1;
  int k = 5;
  uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Grid search with stratified k-fold CV scored by balanced accuracy.
// Preprocessing (and SMOTE for the MLP) is fitted inside each fold on the
// training folds only.
CvResult grid_search(const CellInput& input, Algorithm algorithm,
                     const std::vector<GridCell>& grid, const PipelineConfig& config,
                     uint64_t seed, int k = 5);

// Balanced accuracy where an absent class contributes recall 0.
double balanced_accuracy_lenient(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 bool* missing_class = nullptr);

}  // namespace voicebench
