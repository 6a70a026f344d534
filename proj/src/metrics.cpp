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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "util.hpp"

namespace voicebench {

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) fail(ErrorCode::InvalidArgument, "confusion: length mismatch");
  if (y_true.empty()) fail(ErrorCode::InvalidArgument, "confusion: empty input");
  ConfusionMatrix cm;
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i]) {
      y_pred[i] ? ++cm.tp : ++cm.fn;
    } else {
      y_pred[i] ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

ClassMetrics classification_metrics(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
    fail(ErrorCode::InvalidArgument, "classification_metrics: a class is absent");
  }
  ClassMetrics m;
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  m.balanced_accuracy = (m.sensitivity + m.specificity) / 2.0;
  return m;
}

double auroc(const std::vector<int>& y_true, const std::vector<double>& scores) {
  if (y_true.size() != scores.size()) fail(ErrorCode::InvalidArgument, "auroc: length mismatch");
  int64_t n_pos = 0;
  for (int y : y_true) n_pos += y ? 1 : 0;
  const int64_t n_neg = static_cast<int64_t>(y_true.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) fail(ErrorCode::InvalidArgument, "auroc: single-class input");
  for (double s : scores) {
    if (!std::isfinite(s)) fail(ErrorCode::InvalidArgument, "auroc: non-finite score");
  }

  // Midranks of the scores.
  std::vector<size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(scores.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }

  double rank_sum_pos = 0.0;
  for (size_t k = 0; k < y_true.size(); ++k) {
    if (y_true[k]) rank_sum_pos += rank[k];
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

double metric_value(MetricKind metric, const std::vector<int>& y_true,
                    const std::vector<int>& y_pred, const std::vector<double>& scores) {
  if (metric == MetricKind::Auroc) return auroc(y_true, scores);
  const ClassMetrics m = classification_metrics(confusion(y_true, y_pred));
  switch (metric) {
    case MetricKind::BalancedAccuracy: return m.balanced_accuracy;
    case MetricKind::Sensitivity: return m.sensitivity;
    case MetricKind::Specificity: return m.specificity;
    default: fail(ErrorCode::Internal, "unknown metric");
  }
}

}  // namespace

ConfidenceInterval bootstrap_ci(const std::vector<int>& y_true,
                                const std::vector<int>& y_pred,
                                const std::vector<double>& scores,
                                MetricKind metric, int n_resamples, uint64_t seed) {
  if (n_resamples < 100) fail(ErrorCode::InvalidArgument, "bootstrap_ci: need at least 100 resamples");
  const size_t n = y_true.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "bootstrap_ci: empty input");

  Rng base(seed);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n_resamples));
  int skipped = 0;

  std::vector<int> bt(n), bp(n);
  std::vector<double> bs(n);
  for (int r = 0; r < n_resamples; ++r) {
    Rng rng = base.fork(static_cast<uint64_t>(r));
    bool valid = false;
    for (int attempt = 0; attempt < 10 && !valid; ++attempt) {
      bool saw_pos = false, saw_neg = false;
      for (size_t i = 0; i < n; ++i) {
        const size_t pick = static_cast<size_t>(rng.next_below(n));
        bt[i] = y_true[pick];
        bp[i] = y_pred[pick];
        bs[i] = scores[pick];
        (bt[i] ? saw_pos : saw_neg) = true;
      }
      valid = saw_pos && saw_neg;
    }
    if (!valid) {
      ++skipped;
      continue;
    }
    values.push_back(metric_value(metric, bt, bp, bs));
  }

  if (values.size() < 10) {
    fail(ErrorCode::Numeric, "bootstrap_ci: fewer than 10 valid resamples");
  }
  ConfidenceInterval ci;
  ci.low = percentile(values, 2.5);
  ci.high = percentile(values, 97.5);
  ci.skipped_resamples = skipped;
  return ci;
}

MetricReport evaluate_predictions(const std::vector<int>& y_true,
                                  const std::vector<int>& y_pred,
                                  const std::vector<double>& scores,
                                  int n_resamples, uint64_t seed) {
  MetricReport rep;
  rep.n = static_cast<int64_t>(y_true.size());
  rep.cm = confusion(y_true, y_pred);
  rep.n_resamples = n_resamples;
  rep.seed = seed;

  const ClassMetrics m = classification_metrics(rep.cm);
  rep.balanced_accuracy.point = m.balanced_accuracy;
  rep.sensitivity.point = m.sensitivity;
  rep.specificity.point = m.specificity;
  rep.auroc.point = auroc(y_true, scores);

  struct {
    MetricKind kind;
    MetricWithCi* slot;
  } metrics[] = {
      {MetricKind::BalancedAccuracy, &rep.balanced_accuracy},
      {MetricKind::Sensitivity, &rep.sensitivity},
      {MetricKind::Specificity, &rep.specificity},
      {MetricKind::Auroc, &rep.auroc},
  };
  for (auto& m2 : metrics) {
    const ConfidenceInterval ci = bootstrap_ci(y_true, y_pred, scores, m2.kind, n_resamples, seed);
    m2.slot->ci_low = ci.low;
    m2.slot->ci_high = ci.high;
    m2.slot->skipped_resamples = ci.skipped_resamples;
  }
  return rep;
}

}  // namespace voicebench
