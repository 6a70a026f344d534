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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tree.hpp"
#include "util.hpp"

namespace voicebench {

enum class ImputeStrategy { Mean, Zero };

// Fitted on training rows only; apply never refits.
struct ImputerState {
  ImputeStrategy strategy = ImputeStrategy::Mean;
  std::vector<double> fill;  // per feature; zeros for Zero strategy
};

// A feature with no observed training value is an error unless
// empty_feature_fill provides a constant for it (the composite pipeline uses
// 0 so structurally-missing slots scale to zero and drop out of selection).
ImputerState fit_imputer(const Matrix& train, ImputeStrategy strategy,
                         const std::vector<std::string>& names = {},
                         std::optional<double> empty_feature_fill = std::nullopt);
void apply_imputer(const ImputerState& state, Matrix& m);

// Population (divide-by-N) convention; constant columns keep std 1 so they
// scale to all-zero instead of blowing up.
struct ScalerState {
  std::vector<double> mean;
  std::vector<double> stddev;
};

ScalerState fit_scaler(const Matrix& train);
void apply_scaler(const ScalerState& state, Matrix& m);

// Decision-tree feature selection: keep features whose normalized Gini
// importance exceeds the mean importance over all features; never empty
// (falls back to the single most important feature).
struct SelectorState {
  std::vector<int> selected;  // sorted ascending
  std::vector<double> importances;
  double threshold = 0.0;
};

SelectorState fit_tree_selector(const Matrix& train, const std::vector<int>& y,
                                const TreeParams& params);
Matrix apply_selector(const SelectorState& state, const Matrix& m);

struct ClassWeights {
  double benign = 1.0;
  double malignant = 1.0;
  double of(int label) const { return label ? malignant : benign; }
};

// Balanced heuristic: w_c = N / (2 * N_c). Both classes must be present.
ClassWeights compute_class_weights(const std::vector<int>& y);

struct SmoteResult {
  Matrix X;
  std::vector<int> y;
  bool clamped_k = false;  // k exceeded minority - 1 and was reduced
  int k_used = 0;
};

// Balances the minority class up to the majority count with interpolated
// synthetic points (x + lambda * (nn - x), lambda ~ U[0,1), nn one of the k
// minority nearest neighbors). Already-balanced input is returned unchanged.
SmoteResult smote_oversample(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed);

// [audio block | demographic/symptom block]; empty x2 passes x1 through.
Matrix hconcat(const Matrix& x1, const Matrix& x2);

}  // namespace voicebench
