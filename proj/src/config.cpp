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

#include "config.hpp"

#include <fstream>

#include "error.hpp"

namespace voicebench {

using nlohmann::json;

namespace {

std::string optional_string(const json& j, const char* key) {
  return j.contains(key) ? j.at(key).get<std::string>() : std::string();
}

void require_exists(const std::string& path, const char* what) {
  if (path.empty()) return;
  std::ifstream probe(path);
  if (!probe) fail(ErrorCode::Config, std::string(what) + " path does not exist: " + path);
}

}  // namespace

json RunConfig::to_json() const {
  json j{{"test_fraction", test_fraction},
         {"audio_root", audio_root},
         {"seed", seed},
         {"cv_folds", cv_folds},
         {"bootstrap_resamples", bootstrap_resamples},
         {"jobs", jobs},
         {"timing_repeats", timing_repeats},
         {"grid", grid_overrides},
         {"select_scope", pipeline.select_scope_global ? "global" : "fold"},
         {"smote_k", pipeline.smote_k}};
  if (!train_manifest.empty()) j["train_manifest"] = train_manifest;
  if (!test_manifest.empty()) j["test_manifest"] = test_manifest;
  if (!manifest.empty()) j["manifest"] = manifest;
  if (!label_map.empty()) j["label_map"] = label_map;
  if (!symptom_schema.empty()) j["symptom_schema"] = symptom_schema;
  if (!embeddings.empty()) j["embeddings"] = embeddings;
  if (!acoustic_vectors.empty()) j["acoustic_vectors"] = acoustic_vectors;

  json algos = json::array(), feats = json::array(), vars = json::array();
  for (Algorithm a : algorithms) algos.push_back(algorithm_name(a));
  for (FeatureKind f : feature_sets) feats.push_back(feature_kind_name(f));
  for (Variant v : variants) vars.push_back(variant_name(v));
  j["algorithms"] = algos;
  j["feature_sets"] = feats;
  j["variants"] = vars;

  json ext = json::array();
  for (const auto& e : external) {
    json ej{{"name", e.name}, {"manifest", e.manifest}};
    if (!e.audio_root.empty()) ej["audio_root"] = e.audio_root;
    if (!e.embeddings.empty()) ej["embeddings"] = e.embeddings;
    if (!e.acoustic_vectors.empty()) ej["acoustic_vectors"] = e.acoustic_vectors;
    if (!e.symptom_schema.empty()) ej["symptom_schema"] = e.symptom_schema;
    ext.push_back(std::move(ej));
  }
  j["external"] = ext;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  try {
    cfg.train_manifest = optional_string(j, "train_manifest");
    cfg.test_manifest = optional_string(j, "test_manifest");
    cfg.manifest = optional_string(j, "manifest");
    if (j.contains("test_fraction")) cfg.test_fraction = j.at("test_fraction").get<double>();
    cfg.audio_root = optional_string(j, "audio_root");
    cfg.label_map = optional_string(j, "label_map");
    cfg.symptom_schema = optional_string(j, "symptom_schema");
    cfg.embeddings = optional_string(j, "embeddings");
    cfg.acoustic_vectors = optional_string(j, "acoustic_vectors");

    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(algorithm_from_name(a));
    }
    if (j.contains("feature_sets")) {
      cfg.feature_sets.clear();
      for (const auto& f : j.at("feature_sets")) cfg.feature_sets.push_back(feature_kind_from_name(f));
    }
    if (j.contains("variants")) {
      cfg.variants.clear();
      for (const auto& v : j.at("variants")) cfg.variants.push_back(variant_from_name(v));
    }
    if (j.contains("grid")) cfg.grid_overrides = j.at("grid");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("cv_folds")) cfg.cv_folds = j.at("cv_folds").get<int>();
    if (j.contains("bootstrap_resamples")) {
      cfg.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
    }
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("timing_repeats")) cfg.timing_repeats = j.at("timing_repeats").get<int>();
    if (j.contains("smote_k")) cfg.pipeline.smote_k = j.at("smote_k").get<int>();
    if (j.contains("tree")) {
      const json& t = j.at("tree");
      if (t.contains("max_depth")) cfg.pipeline.tree.max_depth = t.at("max_depth").get<int>();
      if (t.contains("min_leaf")) cfg.pipeline.tree.min_leaf = t.at("min_leaf").get<int>();
      if (t.contains("seed")) cfg.pipeline.tree.seed = t.at("seed").get<uint64_t>();
    }
    if (j.contains("select_scope")) {
      const std::string scope = j.at("select_scope").get<std::string>();
      if (scope == "global") cfg.pipeline.select_scope_global = true;
      else if (scope == "fold") cfg.pipeline.select_scope_global = false;
      else fail(ErrorCode::Config, "select_scope must be 'fold' or 'global'");
    }

    if (j.contains("external")) {
      for (const auto& e : j.at("external")) {
        ExternalDatasetSpec spec;
        spec.name = e.at("name").get<std::string>();
        spec.manifest = e.at("manifest").get<std::string>();
        spec.audio_root = optional_string(e, "audio_root");
        spec.embeddings = optional_string(e, "embeddings");
        spec.acoustic_vectors = optional_string(e, "acoustic_vectors");
        spec.symptom_schema = optional_string(e, "symptom_schema");
        cfg.external.push_back(std::move(spec));
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("run config: ") + e.what());
  }

  // Validation.
  const bool has_pair = !cfg.train_manifest.empty() && !cfg.test_manifest.empty();
  const bool has_single = !cfg.manifest.empty();
  if (has_pair == has_single) {
    fail(ErrorCode::Config,
         "run config: provide either train_manifest+test_manifest or a single manifest to split");
  }
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    fail(ErrorCode::Config, "run config: test_fraction must be in (0, 1)");
  }
  if (cfg.algorithms.empty() || cfg.feature_sets.empty() || cfg.variants.empty()) {
    fail(ErrorCode::Config, "run config: algorithms, feature_sets and variants must be non-empty");
  }
  if (cfg.cv_folds < 2) fail(ErrorCode::Config, "run config: cv_folds must be >= 2");
  if (cfg.jobs < 1) fail(ErrorCode::Config, "run config: jobs must be >= 1");
  if (cfg.bootstrap_resamples < 100) {
    fail(ErrorCode::Config, "run config: bootstrap_resamples must be >= 100");
  }
  for (const std::string& path : {cfg.train_manifest, cfg.test_manifest, cfg.manifest}) {
    require_exists(path, "manifest");
  }
  require_exists(cfg.label_map, "label_map");
  require_exists(cfg.symptom_schema, "symptom_schema");
  require_exists(cfg.embeddings, "embeddings");
  require_exists(cfg.acoustic_vectors, "acoustic_vectors");
  for (const auto& e : cfg.external) {
    require_exists(e.manifest, "external manifest");
    require_exists(e.embeddings, "external embeddings");
    require_exists(e.acoustic_vectors, "external acoustic_vectors");
    require_exists(e.symptom_schema, "external symptom_schema");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, "cannot open run config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, path + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace voicebench
