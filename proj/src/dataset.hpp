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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stats.hpp"

namespace voicebench {

enum class Label { Benign = 0, Malignant = 1 };
enum class Sex { Female = 0, Male = 1 };

struct PatientRecord {
  std::string id;
  std::string audio_path;
  std::string pathology;
  Label label = Label::Benign;
  Sex sex = Sex::Female;
  int age = 0;
  // Declared symptom columns, in schema order; NaN for missing cells.
  std::vector<double> symptoms;
  std::optional<double> packs_per_day;
  std::optional<double> drinks_per_day;
};

// Pathology names listed under the [malignant] heading map to Malignant,
// everything else falls through to Benign. Mapping is total.
struct LabelMap {
  std::set<std::string> malignant_names;
  Label map(const std::string& pathology) const {
    return malignant_names.count(pathology) ? Label::Malignant : Label::Benign;
  }
};

// One pathology name per line under a "[malignant]" heading. '#' comments.
LabelMap load_label_map(const std::string& path);

// Sidecar schema: JSON {"symptom_columns": ["...", ...]}.
std::vector<std::string> load_symptom_schema(const std::string& path);

struct LabeledDataset {
  std::vector<PatientRecord> rows;
  std::vector<std::string> symptom_columns;

  bool has_symptoms() const { return !symptom_columns.empty(); }
  int64_t count(Label label) const;
};

struct LoadResult {
  LabeledDataset dataset;
  std::vector<std::string> warnings;  // e.g. age < 18 rows
};

// Required columns: id, audio_path, pathology, sex, age. Optional:
// packs_per_day, drinks_per_day, plus declared symptom columns. Row order
// is preserved.
LoadResult load_manifest(const std::string& path, const LabelMap& label_map,
                         const std::vector<std::string>& symptom_columns = {});

void write_manifest(const std::string& path, const LabeledDataset& ds);

// Per-class test count = round(fraction * class size), ties toward the
// larger test set. Deterministic in the seed; train/test partition the rows.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& ds,
                                                           double test_fraction, uint64_t seed);

struct SexAgeCell {
  int64_t count = 0;
  int age_min = 0;
  double age_mean = 0.0;
  int age_max = 0;
};

struct DatasetSummary {
  // Indexed [label][sex].
  SexAgeCell cells[2][2];
  int64_t n = 0;
  double prevalence = 0.0;  // fraction malignant
  bool has_durations = false;
  double duration_mean_s = 0.0, duration_min_s = 0.0, duration_max_s = 0.0;
};

// audio_root resolves relative audio paths; pass empty to skip durations.
DatasetSummary summarize(const LabeledDataset& ds, const std::string& audio_root = "");

struct ComparisonReport {
  TestResult age_benign;        // MWU, a vs b, benign rows
  TestResult age_malignant;     // MWU, a vs b, malignant rows
  TestResult gender_benign;     // Fisher, dataset x sex among benign rows
  TestResult gender_malignant;  // Fisher, dataset x sex among malignant rows
  TestResult duration_a;        // MWU, benign vs malignant durations within a
  TestResult duration_b;        // same within b
  double prevalence_a = 0.0;
  double prevalence_b = 0.0;
};

ComparisonReport compare_datasets(const LabeledDataset& a, const LabeledDataset& b,
                                  const std::string& audio_root_a = "",
                                  const std::string& audio_root_b = "");

// audio_root + "/" + audio_path unless audio_path is absolute or root empty.
std::string resolve_audio_path(const std::string& audio_root, const std::string& audio_path);

}  // namespace voicebench
