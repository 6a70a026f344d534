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
#include <string>
#include <vector>

namespace voicebench {

// Positive class is Malignant (label 1) throughout.
struct ConfusionMatrix {
  int64_t tp = 0, fn = 0, tn = 0, fp = 0;
  int64_t total() const { return tp + fn + tn + fp; }
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct ClassMetrics {
  double balanced_accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

// Requires both classes present (tp + fn > 0 and tn + fp > 0).
ClassMetrics classification_metrics(const ConfusionMatrix& cm);

// Rank-based (Mann-Whitney) AUROC with midrank tie handling.
// Requires both classes present.
double auroc(const std::vector<int>& y_true, const std::vector<double>& scores);

enum class MetricKind { BalancedAccuracy, Sensitivity, Specificity, Auroc };

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  int skipped_resamples = 0;  // resamples abandoned after the redraw cap
};

// Nonparametric percentile bootstrap over test rows (2.5/97.5). Resamples
// missing a class are redrawn up to 10 times, then skipped and counted.
// Deterministic: resample r draws from an rng derived from (seed, r).
ConfidenceInterval bootstrap_ci(const std::vector<int>& y_true,
                                const std::vector<int>& y_pred,
                                const std::vector<double>& scores,
                                MetricKind metric, int n_resamples, uint64_t seed);

struct MetricWithCi {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int skipped_resamples = 0;
};

struct MetricReport {
  int64_t n = 0;
  ConfusionMatrix cm;
  MetricWithCi balanced_accuracy, sensitivity, specificity, auroc;
  int n_resamples = 0;
  uint64_t seed = 0;
  std::string note;
};

MetricReport evaluate_predictions(const std::vector<int>& y_true,
                                  const std::vector<int>& y_pred,
                                  const std::vector<double>& scores,
                                  int n_resamples, uint64_t seed);

}  // namespace voicebench
