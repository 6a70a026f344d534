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

#include "config.hpp"
#include "dataset.hpp"
#include "metrics.hpp"
#include "stats.hpp"

namespace voicebench {

struct EvalOutcome {
  std::string test_set;
  bool evaluated = false;
  std::string skip_reason;
};

struct CellOutcome {
  std::string model_id;
  bool ok = false;
  std::string error;
  std::vector<EvalOutcome> evaluations;
};

struct BenchmarkResult {
  std::string run_dir;
  std::vector<CellOutcome> cells;

  bool all_ok() const {
    for (const auto& c : cells) {
      if (!c.ok) return false;
    }
    return true;
  }
};

// Runs the (algorithm x feature set x variant) matrix: grid search on the
// training set, winner refit, holdout + external evaluation, fairness on the
// holdout, optional per-cell timing. Cell outputs land in
// <out_dir>/cells/<model_id>/ (written to a temp dir, then renamed); partial
// failures are isolated per cell and listed in run_summary.json.
BenchmarkResult run_benchmark(const RunConfig& config, const std::string& out_dir);

nlohmann::json metric_report_to_json(const MetricReport& report, const std::string& model_id,
                                     const std::string& test_set);
nlohmann::json fairness_to_json(const FairnessReport& report, const std::string& model_id,
                                const std::string& test_set, bool supplementary = false,
                                const std::vector<double>* ages_correct = nullptr,
                                const std::vector<double>* ages_incorrect = nullptr);
nlohmann::json comparison_to_json(const ComparisonReport& report);

// Markdown document over a finished run directory: metric tables with CIs
// (best value per metric and test set emphasized), fairness p-value tables,
// timing summaries and per-cell status notes.
std::string render_report(const std::string& run_dir);

}  // namespace voicebench
