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
#include <vector>

#include "util.hpp"

namespace voicebench {

// CART with Gini impurity. Fully deterministic: candidate splits are scanned
// in feature-index order and ties keep the first (lowest index, lowest
// threshold) winner, so the seed only labels the configuration.
struct TreeParams {
  int max_depth = 10;
  int min_leaf = 5;
  uint64_t seed = 0;
};

struct DecisionTree {
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;
    double prob_malignant = 0.0;
    int64_t n = 0;
  };
  std::vector<Node> nodes;
  // Normalized Gini importance per feature (sums to 1 when any split exists).
  std::vector<double> importances;

  double predict_proba(const double* x) const;
};

DecisionTree fit_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params);

}  // namespace voicebench
