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

#include "preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace voicebench {

ImputerState fit_imputer(const Matrix& train, ImputeStrategy strategy,
                         const std::vector<std::string>& names,
                         std::optional<double> empty_feature_fill) {
  ImputerState state;
  state.strategy = strategy;
  state.fill.assign(train.cols, 0.0);
  if (strategy == ImputeStrategy::Zero) return state;

  for (size_t c = 0; c < train.cols; ++c) {
    double sum = 0.0;
    int64_t n = 0;
    for (size_t r = 0; r < train.rows; ++r) {
      const double v = train.at(r, c);
      if (!std::isnan(v)) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) {
      if (empty_feature_fill) {
        state.fill[c] = *empty_feature_fill;
        continue;
      }
      const std::string name = c < names.size() ? names[c] : "#" + std::to_string(c);
      fail(ErrorCode::InvalidArgument,
           "mean imputer: feature '" + name + "' has no observed training values");
    }
    state.fill[c] = sum / static_cast<double>(n);
  }
  return state;
}

void apply_imputer(const ImputerState& state, Matrix& m) {
  if (m.cols != state.fill.size()) fail(ErrorCode::InvalidArgument, "apply_imputer: width mismatch");
  for (size_t r = 0; r < m.rows; ++r) {
    for (size_t c = 0; c < m.cols; ++c) {
      if (std::isnan(m.at(r, c))) m.at(r, c) = state.fill[c];
    }
  }
}

ScalerState fit_scaler(const Matrix& train) {
  ScalerState state;
  state.mean.assign(train.cols, 0.0);
  state.stddev.assign(train.cols, 1.0);
  if (train.rows == 0) return state;
  for (size_t c = 0; c < train.cols; ++c) {
    double sum = 0.0;
    for (size_t r = 0; r < train.rows; ++r) sum += train.at(r, c);
    const double mean = sum / static_cast<double>(train.rows);
    double var = 0.0;
    for (size_t r = 0; r < train.rows; ++r) {
      const double d = train.at(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(train.rows);
    state.mean[c] = mean;
    state.stddev[c] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return state;
}

void apply_scaler(const ScalerState& state, Matrix& m) {
  if (m.cols != state.mean.size()) fail(ErrorCode::InvalidArgument, "apply_scaler: width mismatch");
  for (size_t r = 0; r < m.rows; ++r) {
    for (size_t c = 0; c < m.cols; ++c) {
      m.at(r, c) = (m.at(r, c) - state.mean[c]) / state.stddev[c];
    }
  }
}

SelectorState fit_tree_selector(const Matrix& train, const std::vector<int>& y,
                                const TreeParams& params) {
  if (train.cols == 0) fail(ErrorCode::InvalidArgument, "fit_tree_selector: no features");
  const DecisionTree tree = fit_tree(train, y, params);

  SelectorState state;
  state.importances = tree.importances;
  double mean = 0.0;
  for (double v : state.importances) mean += v;
  mean /= static_cast<double>(state.importances.size());
  state.threshold = mean;

  for (size_t i = 0; i < state.importances.size(); ++i) {
    if (state.importances[i] > mean) state.selected.push_back(static_cast<int>(i));
  }
  if (state.selected.empty()) {
    // Uniform (or zero) importances: keep the single best, lowest index wins.
    size_t best = 0;
    for (size_t i = 1; i < state.importances.size(); ++i) {
      if (state.importances[i] > state.importances[best]) best = i;
    }
    state.selected.push_back(static_cast<int>(best));
  }
  return state;
}

Matrix apply_selector(const SelectorState& state, const Matrix& m) {
  Matrix out(m.rows, state.selected.size());
  for (size_t r = 0; r < m.rows; ++r) {
    for (size_t c = 0; c < state.selected.size(); ++c) {
      out.at(r, c) = m.at(r, static_cast<size_t>(state.selected[c]));
    }
  }
  return out;
}

ClassWeights compute_class_weights(const std::vector<int>& y) {
  int64_t n0 = 0, n1 = 0;
  for (int v : y) (v ? n1 : n0) += 1;
  if (n0 == 0 || n1 == 0) fail(ErrorCode::InvalidArgument, "compute_class_weights: a class is missing");
  ClassWeights w;
  const auto n = static_cast<double>(n0 + n1);
  w.benign = n / (2.0 * static_cast<double>(n0));
  w.malignant = n / (2.0 * static_cast<double>(n1));
  return w;
}

SmoteResult smote_oversample(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed) {
  if (X.rows != y.size()) fail(ErrorCode::InvalidArgument, "smote: X/y size mismatch");
  std::vector<size_t> minority, majority;
  for (size_t i = 0; i < y.size(); ++i) (y[i] ? minority : majority).push_back(i);
  int minority_label = 1;
  if (minority.size() > majority.size()) {
    std::swap(minority, majority);
    minority_label = 0;
  }

  SmoteResult out;
  out.X = X;
  out.y = y;
  out.k_used = k;
  if (minority.size() == majority.size()) return out;
  if (minority.size() < 2) fail(ErrorCode::InvalidArgument, "smote: minority class needs at least 2 samples");
  if (k < 1) fail(ErrorCode::InvalidArgument, "smote: k must be >= 1");
  if (static_cast<size_t>(k) > minority.size() - 1) {
    out.clamped_k = true;
    out.k_used = static_cast<int>(minority.size()) - 1;
  }
  const auto kk = static_cast<size_t>(out.k_used);

  // k nearest minority neighbors per minority point (squared Euclidean,
  // stable index order on ties).
  const size_t m = minority.size();
  std::vector<std::vector<size_t>> neighbors(m);
  std::vector<std::pair<double, size_t>> dist;
  for (size_t a = 0; a < m; ++a) {
    dist.clear();
    for (size_t b = 0; b < m; ++b) {
      if (b == a) continue;
      double d2 = 0.0;
      const double* xa = X.row(minority[a]);
      const double* xb = X.row(minority[b]);
      for (size_t c = 0; c < X.cols; ++c) d2 += (xa[c] - xb[c]) * (xa[c] - xb[c]);
      dist.emplace_back(d2, b);
    }
    std::stable_sort(dist.begin(), dist.end(),
                     [](const auto& p, const auto& q) { return p.first < q.first; });
    for (size_t j = 0; j < kk; ++j) neighbors[a].push_back(dist[j].second);
  }

  Rng rng(seed);
  const size_t need = majority.size() - minority.size();
  Matrix synth(need, X.cols);
  for (size_t s = 0; s < need; ++s) {
    const size_t a = static_cast<size_t>(rng.next_below(m));
    const size_t b = neighbors[a][static_cast<size_t>(rng.next_below(kk))];
    const double lambda = rng.next_double();
    const double* xa = X.row(minority[a]);
    const double* xb = X.row(minority[b]);
    for (size_t c = 0; c < X.cols; ++c) {
      synth.at(s, c) = xa[c] + lambda * (xb[c] - xa[c]);
    }
  }

  Matrix combined(X.rows + need, X.cols);
  std::copy(X.data.begin(), X.data.end(), combined.data.begin());
  std::copy(synth.data.begin(), synth.data.end(), combined.data.begin() + static_cast<long>(X.data.size()));
  out.X = std::move(combined);
  out.y.insert(out.y.end(), need, minority_label);
  return out;
}

Matrix hconcat(const Matrix& x1, const Matrix& x2) {
  if (x2.cols == 0) return x1;
  if (x1.cols == 0) return x2;
  if (x1.rows != x2.rows) fail(ErrorCode::InvalidArgument, "hconcat: row mismatch");
  Matrix out(x1.rows, x1.cols + x2.cols);
  for (size_t r = 0; r < x1.rows; ++r) {
    std::copy(x1.row(r), x1.row(r) + x1.cols, out.row(r));
    std::copy(x2.row(r), x2.row(r) + x2.cols, out.row(r) + x1.cols);
  }
  return out;
}

}  // namespace voicebench
