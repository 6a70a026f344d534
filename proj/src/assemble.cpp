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

#include "assemble.hpp"

#include <cmath>
#include <limits>

#include "acoustic.hpp"
#include "error.hpp"
#include "mfcc.hpp"
#include "resample.hpp"

namespace voicebench {

Recording load_recording_16k(const std::string& path) {
  return resample(decode_wav(path), kPipelineRate);
}

Matrix mfcc_features(const Recording& rec) { return extract_mfcc(rec); }

std::vector<double> acoustic_features(const Recording& rec, const FeatureSource& source,
                                      const std::string& id) {
  if (source.external_acoustic) {
    const auto it = source.external_acoustic->by_id.find(id);
    if (it == source.external_acoustic->by_id.end()) {
      fail(ErrorCode::Schema, "external acoustic vectors: id '" + id + "' not found");
    }
    return mean_pool(it->second);
  }
  return extract_acoustic(rec);
}

std::vector<double> embedding_features(const FeatureSource& source, const std::string& id) {
  if (!source.embeddings) {
    fail(ErrorCode::Config, "embedding feature set requires an embeddings file");
  }
  const auto it = source.embeddings->by_id.find(id);
  if (it == source.embeddings->by_id.end()) {
    fail(ErrorCode::Schema, "embeddings: id '" + id + "' not found");
  }
  return mean_pool(it->second);
}

std::vector<std::string> demo_block_names(const LabeledDataset& ds, Variant variant) {
  std::vector<std::string> names;
  if (variant_uses_demographics(variant)) {
    names.push_back("age");
    names.push_back("sex");
  }
  if (variant_uses_symptoms(variant)) {
    for (const auto& c : ds.symptom_columns) names.push_back(c);
    bool any_packs = false, any_drinks = false;
    for (const auto& row : ds.rows) {
      any_packs = any_packs || row.packs_per_day.has_value();
      any_drinks = any_drinks || row.drinks_per_day.has_value();
    }
    if (any_packs) names.push_back("packs_per_day");
    if (any_drinks) names.push_back("drinks_per_day");
  }
  return names;
}

std::vector<double> demo_block_values(const PatientRecord& rec, const LabeledDataset& ds,
                                      Variant variant) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;
  if (variant_uses_demographics(variant)) {
    values.push_back(static_cast<double>(rec.age));
    values.push_back(rec.sex == Sex::Male ? 1.0 : 0.0);
  }
  if (variant_uses_symptoms(variant)) {
    for (size_t s = 0; s < ds.symptom_columns.size(); ++s) {
      values.push_back(s < rec.symptoms.size() ? rec.symptoms[s] : kNaN);
    }
    bool any_packs = false, any_drinks = false;
    for (const auto& row : ds.rows) {
      any_packs = any_packs || row.packs_per_day.has_value();
      any_drinks = any_drinks || row.drinks_per_day.has_value();
    }
    if (any_packs) values.push_back(rec.packs_per_day.value_or(kNaN));
    if (any_drinks) values.push_back(rec.drinks_per_day.value_or(kNaN));
  }
  return values;
}

std::vector<std::string> mfcc_flat_names(int target_frames) {
  std::vector<std::string> names;
  names.reserve(20 * static_cast<size_t>(target_frames));
  for (int c = 0; c < 20; ++c) {
    for (int f = 0; f < target_frames; ++f) {
      names.push_back("mfcc" + std::to_string(c) + "_f" + std::to_string(f));
    }
  }
  return names;
}

CellInput build_cell_input(const LabeledDataset& ds, FeatureKind kind, Variant variant,
                           const FeatureSource& source) {
  if (variant_uses_symptoms(variant) && !ds.has_symptoms()) {
    fail(ErrorCode::Schema, "variant '" + std::string(variant_name(variant)) +
                                "' needs symptom columns, but the dataset declares none");
  }

  CellInput input;
  input.feature_set = kind;
  const size_t n = ds.rows.size();

  if (kind == FeatureKind::Mfcc) {
    input.mfcc.reserve(n);
    for (const auto& row : ds.rows) {
      input.mfcc.push_back(
          mfcc_features(load_recording_16k(resolve_audio_path(source.audio_root, row.audio_path))));
    }
  } else {
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (const auto& row : ds.rows) {
      if (kind == FeatureKind::Embedding) {
        rows.push_back(embedding_features(source, row.id));
      } else if (source.external_acoustic) {
        rows.push_back(acoustic_features(Recording{}, source, row.id));
      } else {
        rows.push_back(acoustic_features(
            load_recording_16k(resolve_audio_path(source.audio_root, row.audio_path)), source,
            row.id));
      }
    }
    const size_t dim = rows.empty() ? 0 : rows[0].size();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != dim) {
        fail(ErrorCode::Schema, "feature width differs across rows (id '" + ds.rows[r].id + "')");
      }
    }
    input.audio = Matrix(n, dim);
    for (size_t r = 0; r < n; ++r) {
      std::copy(rows[r].begin(), rows[r].end(), input.audio.row(r));
    }
    if (kind == FeatureKind::Acoustic && !source.external_acoustic) {
      const auto& names = acoustic_feature_names();
      input.audio_names.assign(names.begin(), names.end());
    } else {
      for (size_t c = 0; c < dim; ++c) input.audio_names.push_back("dim" + std::to_string(c));
    }
  }

  input.demo_names = demo_block_names(ds, variant);
  input.demo = Matrix(n, input.demo_names.size());
  for (size_t r = 0; r < n; ++r) {
    const std::vector<double> values = demo_block_values(ds.rows[r], ds, variant);
    std::copy(values.begin(), values.end(), input.demo.row(r));
  }

  input.y.reserve(n);
  for (const auto& row : ds.rows) input.y.push_back(row.label == Label::Malignant ? 1 : 0);
  return input;
}

}  // namespace voicebench
