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

#include "tree.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace voicebench {

namespace {

double gini(int64_t n_pos, int64_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(n_pos) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

}  // namespace

double DecisionTree::predict_proba(const double* x) const {
  int idx = 0;
  while (nodes[static_cast<size_t>(idx)].feature >= 0) {
    const Node& n = nodes[static_cast<size_t>(idx)];
    idx = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<size_t>(idx)].prob_malignant;
}

DecisionTree fit_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params) {
  if (X.rows != y.size()) fail(ErrorCode::InvalidArgument, "fit_tree: X/y size mismatch");
  if (X.rows == 0 || X.cols == 0) fail(ErrorCode::InvalidArgument, "fit_tree: empty input");
  bool has0 = false, has1 = false;
  for (int v : y) (v ? has1 : has0) = true;
  if (!has0 || !has1) fail(ErrorCode::InvalidArgument, "fit_tree: single-class input");

  DecisionTree tree;
  tree.importances.assign(X.cols, 0.0);
  const auto n_total = static_cast<double>(X.rows);

  struct Work {
    std::vector<size_t> rows;
    int depth;
    int node_index;
  };

  auto make_node = [&](const std::vector<size_t>& rows) {
    DecisionTree::Node node;
    node.n = static_cast<int64_t>(rows.size());
    int64_t pos = 0;
    for (size_t r : rows) pos += y[r];
    node.prob_malignant = static_cast<double>(pos) / static_cast<double>(rows.size());
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  std::vector<size_t> all(X.rows);
  for (size_t i = 0; i < X.rows; ++i) all[i] = i;
  const int root = make_node(all);
  std::vector<Work> stack;
  stack.push_back({std::move(all), 0, root});

  std::vector<std::pair<double, int>> sorted;  // (value, label)
  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();
    const auto n = static_cast<int64_t>(work.rows.size());
    int64_t n_pos = 0;
    for (size_t r : work.rows) n_pos += y[r];

    const bool pure = n_pos == 0 || n_pos == n;
    if (pure || work.depth >= params.max_depth || n < 2 * params.min_leaf) continue;

    const double parent_impurity = gini(n_pos, n);
    Split best;
    for (size_t f = 0; f < X.cols; ++f) {
      sorted.clear();
      for (size_t r : work.rows) sorted.emplace_back(X.at(r, f), y[r]);
      std::sort(sorted.begin(), sorted.end());

      int64_t left_n = 0, left_pos = 0;
      for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left_n;
        left_pos += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;  // no boundary here
        if (left_n < params.min_leaf || n - left_n < params.min_leaf) continue;
        const double gain = parent_impurity -
                            (static_cast<double>(left_n) / static_cast<double>(n)) * gini(left_pos, left_n) -
                            (static_cast<double>(n - left_n) / static_cast<double>(n)) *
                                gini(n_pos - left_pos, n - left_n);
        // Strict > keeps the lowest feature index / lowest threshold on ties.
        if (gain > best.gain + 1e-15 && gain > 1e-12) {
          best.found = true;
          best.feature = static_cast<int>(f);
          best.threshold = (sorted[i].first + sorted[i + 1].first) / 2.0;
          best.gain = gain;
        }
      }
    }
    if (!best.found) continue;

    std::vector<size_t> left_rows, right_rows;
    for (size_t r : work.rows) {
      (X.at(r, static_cast<size_t>(best.feature)) <= best.threshold ? left_rows : right_rows).push_back(r);
    }

    DecisionTree::Node& node = tree.nodes[static_cast<size_t>(work.node_index)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    tree.importances[static_cast<size_t>(best.feature)] +=
        (static_cast<double>(n) / n_total) * best.gain;

    const int left_index = make_node(left_rows);
    const int right_index = make_node(right_rows);
    tree.nodes[static_cast<size_t>(work.node_index)].left = left_index;
    tree.nodes[static_cast<size_t>(work.node_index)].right = right_index;
    stack.push_back({std::move(right_rows), work.depth + 1, right_index});
    stack.push_back({std::move(left_rows), work.depth + 1, left_index});
  }

  double total = 0.0;
  for (double v : tree.importances) total += v;
  if (total > 0.0) {
    for (double& v : tree.importances) v /= total;
  }
  return tree;
}

}  // namespace voicebench
