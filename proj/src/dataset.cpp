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

#include "dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "csv.hpp"
#include "error.hpp"
#include "util.hpp"
#include "wav.hpp"

namespace voicebench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_number(const std::string& cell, const std::string& context) {
  double v = 0.0;
  const std::string t = trim(cell);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    fail(ErrorCode::RowError, context + ": bad number '" + cell + "'");
  }
  return v;
}

std::vector<double> dataset_durations(const LabeledDataset& ds, const std::string& audio_root,
                                      std::vector<Label>* labels_out) {
  std::vector<double> durations;
  for (const auto& row : ds.rows) {
    const std::string path = resolve_audio_path(audio_root, row.audio_path);
    try {
      durations.push_back(wav_info(path).duration);
      if (labels_out) labels_out->push_back(row.label);
    } catch (const Error&) {
      // Unresolvable audio leaves duration comparisons not computable.
    }
  }
  return durations;
}

}  // namespace

std::string resolve_audio_path(const std::string& audio_root, const std::string& audio_path) {
  if (audio_root.empty() || (!audio_path.empty() && audio_path[0] == '/')) return audio_path;
  return audio_root + "/" + audio_path;
}

int64_t LabeledDataset::count(Label label) const {
  int64_t n = 0;
  for (const auto& row : rows) n += row.label == label ? 1 : 0;
  return n;
}

LabelMap load_label_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  LabelMap map;
  std::string line;
  bool in_malignant = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      in_malignant = lowercase(t) == "[malignant]";
      continue;
    }
    if (in_malignant) map.malignant_names.insert(t);
  }
  return map;
}

std::vector<std::string> load_symptom_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, path + ": " + e.what());
  }
  if (!j.contains("symptom_columns") || !j["symptom_columns"].is_array()) {
    fail(ErrorCode::Schema, path + ": expected a 'symptom_columns' array");
  }
  std::vector<std::string> columns;
  for (const auto& c : j["symptom_columns"]) columns.push_back(c.get<std::string>());
  return columns;
}

LoadResult load_manifest(const std::string& path, const LabelMap& label_map,
                         const std::vector<std::string>& symptom_columns) {
  const CsvTable csv = read_csv(path);

  const char* required[] = {"id", "audio_path", "pathology", "sex", "age"};
  for (const char* col : required) {
    if (csv.column(col) < 0) fail(ErrorCode::Schema, path + ": missing required column '" + std::string(col) + "'");
  }
  const int col_id = csv.column("id");
  const int col_audio = csv.column("audio_path");
  const int col_pathology = csv.column("pathology");
  const int col_sex = csv.column("sex");
  const int col_age = csv.column("age");
  const int col_packs = csv.column("packs_per_day");
  const int col_drinks = csv.column("drinks_per_day");

  std::vector<int> symptom_idx;
  for (const auto& name : symptom_columns) {
    const int idx = csv.column(name);
    if (idx < 0) fail(ErrorCode::Schema, path + ": declared symptom column '" + name + "' not in manifest");
    symptom_idx.push_back(idx);
  }

  LoadResult result;
  result.dataset.symptom_columns = symptom_columns;
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::string context = path + ": row " + std::to_string(r);
    PatientRecord rec;
    rec.id = row[static_cast<size_t>(col_id)];
    rec.audio_path = row[static_cast<size_t>(col_audio)];
    rec.pathology = row[static_cast<size_t>(col_pathology)];
    rec.label = label_map.map(rec.pathology);

    const std::string sex = lowercase(trim(row[static_cast<size_t>(col_sex)]));
    if (sex == "m" || sex == "male") rec.sex = Sex::Male;
    else if (sex == "f" || sex == "female") rec.sex = Sex::Female;
    else fail(ErrorCode::RowError, context + ": unknown sex '" + row[static_cast<size_t>(col_sex)] + "'");

    const double age = parse_number(row[static_cast<size_t>(col_age)], context + ", column 'age'");
    if (age != std::floor(age)) fail(ErrorCode::RowError, context + ": age '" +
                                                              row[static_cast<size_t>(col_age)] +
                                                              "' is not an integer");
    rec.age = static_cast<int>(age);
    if (rec.age < 18) {
      result.warnings.push_back(context + ": age " + std::to_string(rec.age) +
                                " is below 18; adult-only datasets expected");
    }

    auto optional_number = [&](int col, const char* name) -> std::optional<double> {
      if (col < 0) return std::nullopt;
      const std::string& cell = row[static_cast<size_t>(col)];
      if (trim(cell).empty() || cell == "NA") return std::nullopt;
      return parse_number(cell, context + ", column '" + name + "'");
    };
    rec.packs_per_day = optional_number(col_packs, "packs_per_day");
    rec.drinks_per_day = optional_number(col_drinks, "drinks_per_day");

    for (size_t s = 0; s < symptom_idx.size(); ++s) {
      const std::string& cell = row[static_cast<size_t>(symptom_idx[s])];
      if (trim(cell).empty() || cell == "NA") rec.symptoms.push_back(kNaN);
      else rec.symptoms.push_back(parse_number(cell, context + ", column '" + symptom_columns[s] + "'"));
    }
    result.dataset.rows.push_back(std::move(rec));
  }
  return result;
}

void write_manifest(const std::string& path, const LabeledDataset& ds) {
  CsvTable csv;
  csv.header = {"id", "audio_path", "pathology", "sex", "age", "packs_per_day", "drinks_per_day"};
  for (const auto& name : ds.symptom_columns) csv.header.push_back(name);

  auto fmt = [](double v) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& rec : ds.rows) {
    std::vector<std::string> row{
        rec.id,
        rec.audio_path,
        rec.pathology,
        rec.sex == Sex::Male ? "male" : "female",
        std::to_string(rec.age),
        rec.packs_per_day ? fmt(*rec.packs_per_day) : "",
        rec.drinks_per_day ? fmt(*rec.drinks_per_day) : "",
    };
    for (double s : rec.symptoms) row.push_back(std::isnan(s) ? "" : fmt(s));
    csv.rows.push_back(std::move(row));
  }
  write_csv(path, csv);
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& ds,
                                                           double test_fraction, uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail(ErrorCode::InvalidArgument, "stratified_split: test_fraction must be in (0, 1)");
  }
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < ds.rows.size(); ++i) {
    by_class[ds.rows[i].label == Label::Malignant ? 1 : 0].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2) {
      fail(ErrorCode::InvalidArgument,
           std::string("stratified_split: class '") + (c ? "malignant" : "benign") +
               "' has fewer than 2 members");
    }
  }

  Rng rng(seed);
  std::vector<bool> in_test(ds.rows.size(), false);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    rng.shuffle(idx);
    // round-half-up keeps ties resolved toward the larger test set
    const auto n_test = static_cast<size_t>(
        std::floor(test_fraction * static_cast<double>(idx.size()) + 0.5));
    for (size_t i = 0; i < n_test; ++i) in_test[idx[i]] = true;
  }

  LabeledDataset train, test;
  train.symptom_columns = ds.symptom_columns;
  test.symptom_columns = ds.symptom_columns;
  for (size_t i = 0; i < ds.rows.size(); ++i) {
    (in_test[i] ? test : train).rows.push_back(ds.rows[i]);
  }
  return {train, test};
}

DatasetSummary summarize(const LabeledDataset& ds, const std::string& audio_root) {
  DatasetSummary s;
  s.n = static_cast<int64_t>(ds.rows.size());
  double age_sums[2][2] = {};
  for (const auto& row : ds.rows) {
    const int l = row.label == Label::Malignant ? 1 : 0;
    const int g = row.sex == Sex::Male ? 1 : 0;
    SexAgeCell& cell = s.cells[l][g];
    if (cell.count == 0) {
      cell.age_min = row.age;
      cell.age_max = row.age;
    }
    cell.age_min = std::min(cell.age_min, row.age);
    cell.age_max = std::max(cell.age_max, row.age);
    age_sums[l][g] += row.age;
    ++cell.count;
  }
  for (int l = 0; l < 2; ++l) {
    for (int g = 0; g < 2; ++g) {
      if (s.cells[l][g].count > 0) {
        s.cells[l][g].age_mean = age_sums[l][g] / static_cast<double>(s.cells[l][g].count);
      }
    }
  }
  if (s.n > 0) s.prevalence = static_cast<double>(ds.count(Label::Malignant)) / static_cast<double>(s.n);

  const std::vector<double> durations = dataset_durations(ds, audio_root, nullptr);
  if (!durations.empty()) {
    s.has_durations = true;
    s.duration_mean_s = mean_of(durations);
    s.duration_min_s = *std::min_element(durations.begin(), durations.end());
    s.duration_max_s = *std::max_element(durations.begin(), durations.end());
  }
  return s;
}

ComparisonReport compare_datasets(const LabeledDataset& a, const LabeledDataset& b,
                                  const std::string& audio_root_a,
                                  const std::string& audio_root_b) {
  ComparisonReport rep;

  auto ages_of = [](const LabeledDataset& ds, Label label) {
    std::vector<double> ages;
    for (const auto& row : ds.rows) {
      if (row.label == label) ages.push_back(static_cast<double>(row.age));
    }
    return ages;
  };
  auto sex_table = [](const LabeledDataset& x, const LabeledDataset& y, Label label) {
    Table2x2 t;
    for (const auto& row : x.rows) {
      if (row.label != label) continue;
      row.sex == Sex::Male ? ++t.a : ++t.b;
    }
    for (const auto& row : y.rows) {
      if (row.label != label) continue;
      row.sex == Sex::Male ? ++t.c : ++t.d;
    }
    return t;
  };
  auto not_computable = [](const char* why) {
    TestResult r;
    r.computable = false;
    r.note = why;
    return r;
  };

  for (const Label label : {Label::Benign, Label::Malignant}) {
    TestResult* age_slot = label == Label::Benign ? &rep.age_benign : &rep.age_malignant;
    TestResult* sex_slot = label == Label::Benign ? &rep.gender_benign : &rep.gender_malignant;
    const std::vector<double> ages_a = ages_of(a, label);
    const std::vector<double> ages_b = ages_of(b, label);
    if (ages_a.empty() || ages_b.empty()) {
      *age_slot = not_computable("a class is empty in one dataset");
      *sex_slot = not_computable("a class is empty in one dataset");
      continue;
    }
    *age_slot = mann_whitney_u(ages_a, ages_b);
    *sex_slot = fisher_exact(sex_table(a, b, label));
  }

  if (!a.rows.empty()) rep.prevalence_a = static_cast<double>(a.count(Label::Malignant)) / static_cast<double>(a.rows.size());
  if (!b.rows.empty()) rep.prevalence_b = static_cast<double>(b.count(Label::Malignant)) / static_cast<double>(b.rows.size());

  // Within-dataset duration comparison, benign vs malignant.
  auto duration_test = [&](const LabeledDataset& ds, const std::string& root) {
    std::vector<Label> labels;
    const std::vector<double> durations = dataset_durations(ds, root, &labels);
    if (durations.size() != ds.rows.size() || durations.empty()) {
      return not_computable("audio paths not resolvable");
    }
    std::vector<double> benign, malignant;
    for (size_t i = 0; i < durations.size(); ++i) {
      (labels[i] == Label::Malignant ? malignant : benign).push_back(durations[i]);
    }
    if (benign.empty() || malignant.empty()) return not_computable("a class is empty");
    return mann_whitney_u(benign, malignant);
  };
  rep.duration_a = duration_test(a, audio_root_a);
  rep.duration_b = duration_test(b, audio_root_b);
  return rep;
}

}  // namespace voicebench
