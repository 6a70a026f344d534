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

#include "voicebench/voicebench.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "acoustic.hpp"
#include "assemble.hpp"
#include "benchmark.hpp"
#include "bundle.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "cv.hpp"
#include "dataset.hpp"
#include "embeddings.hpp"
#include "error.hpp"
#include "features.hpp"
#include "mfcc.hpp"
#include "timing.hpp"

using namespace voicebench;
using nlohmann::json;

// Opaque handle definitions.
struct vb_dataset {
  LabeledDataset ds;
};

struct vb_bundle {
  ModelBundle bundle;
};

namespace {

thread_local std::string g_last_error = "no error";

vb_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return VB_E_INVALID_ARGUMENT;
    case ErrorCode::Io: return VB_E_IO;
    case ErrorCode::Format: return VB_E_FORMAT;
    case ErrorCode::Schema: return VB_E_SCHEMA;
    case ErrorCode::RowError: return VB_E_ROW;
    case ErrorCode::State: return VB_E_STATE;
    case ErrorCode::Numeric: return VB_E_NUMERIC;
    case ErrorCode::Unsupported: return VB_E_UNSUPPORTED;
    case ErrorCode::Checksum: return VB_E_CHECKSUM;
    case ErrorCode::Version: return VB_E_VERSION;
    case ErrorCode::Config: return VB_E_CONFIG;
    case ErrorCode::Partial: return VB_E_PARTIAL;
    case ErrorCode::Internal: return VB_E_INTERNAL;
  }
  return VB_E_INTERNAL;
}

template <typename Fn>
vb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return VB_E_INTERNAL;
  }
}

vb_status invalid(const char* message) {
  g_last_error = message;
  return VB_E_INVALID_ARGUMENT;
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(malloc(text.size() + 1));
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

std::string string_or_empty(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* vb_version(void) { return "0.1.0"; }
int vb_abi_version(void) { return 1; }

const char* vb_status_name(vb_status status) {
  switch (status) {
    case VB_OK: return "ok";
    case VB_E_INVALID_ARGUMENT: return "invalid_argument";
    case VB_E_IO: return "io";
    case VB_E_FORMAT: return "format";
    case VB_E_SCHEMA: return "schema";
    case VB_E_ROW: return "row";
    case VB_E_STATE: return "state";
    case VB_E_NUMERIC: return "numeric";
    case VB_E_UNSUPPORTED: return "unsupported";
    case VB_E_CHECKSUM: return "checksum";
    case VB_E_VERSION: return "version";
    case VB_E_CONFIG: return "config";
    case VB_E_PARTIAL: return "partial";
    case VB_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* vb_last_error(void) { return g_last_error.c_str(); }

void vb_string_free(char* text) { free(text); }

vb_status vb_dataset_load(const char* manifest_csv, const char* label_map_path,
                          const char* symptom_schema_path, vb_dataset** out) {
  if (!manifest_csv || !out) return invalid("vb_dataset_load: NULL argument");
  return guarded([&] {
    const LabelMap map =
        label_map_path ? load_label_map(label_map_path) : LabelMap{};
    const std::vector<std::string> symptoms =
        symptom_schema_path ? load_symptom_schema(symptom_schema_path) : std::vector<std::string>{};
    LoadResult loaded = load_manifest(manifest_csv, map, symptoms);
    auto* handle = new vb_dataset{std::move(loaded.dataset)};
    *out = handle;
    return VB_OK;
  });
}

void vb_dataset_free(vb_dataset* ds) { delete ds; }

int64_t vb_dataset_rows(const vb_dataset* ds) {
  return ds ? static_cast<int64_t>(ds->ds.rows.size()) : -1;
}

int64_t vb_dataset_count(const vb_dataset* ds, int malignant) {
  if (!ds) return -1;
  return ds->ds.count(malignant ? Label::Malignant : Label::Benign);
}

vb_status vb_dataset_split(const vb_dataset* ds, double test_fraction, uint64_t seed,
                           vb_dataset** train_out, vb_dataset** test_out) {
  if (!ds || !train_out || !test_out) return invalid("vb_dataset_split: NULL argument");
  return guarded([&] {
    auto [train, test] = stratified_split(ds->ds, test_fraction, seed);
    *train_out = new vb_dataset{std::move(train)};
    *test_out = new vb_dataset{std::move(test)};
    return VB_OK;
  });
}

vb_status vb_dataset_save(const vb_dataset* ds, const char* path) {
  if (!ds || !path) return invalid("vb_dataset_save: NULL argument");
  return guarded([&] {
    write_manifest(path, ds->ds);
    return VB_OK;
  });
}

vb_status vb_compare_datasets(const vb_dataset* a, const vb_dataset* b, const char* audio_root_a,
                              const char* audio_root_b, char** report_json_out) {
  if (!a || !b || !report_json_out) return invalid("vb_compare_datasets: NULL argument");
  return guarded([&] {
    const ComparisonReport report =
        compare_datasets(a->ds, b->ds, string_or_empty(audio_root_a), string_or_empty(audio_root_b));
    *report_json_out = copy_string(comparison_to_json(report).dump(2));
    return VB_OK;
  });
}

vb_status vb_extract_features(const vb_dataset* ds, const char* audio_root,
                              const char* feature_set, const char* embeddings_path,
                              int target_frames, const char* out_table_path) {
  if (!ds || !feature_set || !out_table_path) return invalid("vb_extract_features: NULL argument");
  return guarded([&] {
    const FeatureKind kind = feature_kind_from_name(feature_set);
    FeatureSource source;
    source.audio_root = string_or_empty(audio_root);
    EmbeddingSet set;
    if (embeddings_path) {
      set = load_embeddings(embeddings_path);
      if (kind == FeatureKind::Embedding) source.embeddings = &set;
      else if (kind == FeatureKind::Acoustic) source.external_acoustic = &set;
    }

    const CellInput input = build_cell_input(ds->ds, kind, Variant::Voice, source);
    FeatureMatrix fm;
    for (const auto& row : ds->ds.rows) fm.ids.push_back(row.id);
    if (kind == FeatureKind::Mfcc) {
      int frames = target_frames;
      if (frames <= 0) {
        std::vector<int> counts;
        for (const auto& m : input.mfcc) counts.push_back(static_cast<int>(m.cols));
        frames = mfcc_target_frames(counts);
      }
      fm.names = mfcc_flat_names(frames);
      fm.values = Matrix(input.mfcc.size(), fm.names.size());
      for (size_t r = 0; r < input.mfcc.size(); ++r) {
        const std::vector<double> flat = standardize_mfcc(input.mfcc[r], frames);
        std::copy(flat.begin(), flat.end(), fm.values.row(r));
      }
    } else {
      fm.names = input.audio_names;
      fm.values = input.audio;
    }
    write_feature_table(out_table_path, fm);
    return VB_OK;
  });
}

vb_status vb_train(const vb_dataset* train, const vb_train_spec* spec,
                   const char* out_bundle_path, char** cv_results_json_out) {
  if (!train || !spec || !out_bundle_path) return invalid("vb_train: NULL argument");
  if (!spec->algorithm || !spec->feature_set || !spec->variant) {
    return invalid("vb_train: spec algorithm/feature_set/variant must be set");
  }
  return guarded([&] {
    const Algorithm algorithm = algorithm_from_name(spec->algorithm);
    const FeatureKind kind = feature_kind_from_name(spec->feature_set);
    const Variant variant = variant_from_name(spec->variant);

    FeatureSource source;
    source.audio_root = string_or_empty(spec->audio_root);
    EmbeddingSet set;
    if (spec->embeddings_path) {
      set = load_embeddings(spec->embeddings_path);
      source.embeddings = &set;
    }

    PipelineConfig pipeline_config;
    if (spec->smote_k > 0) pipeline_config.smote_k = spec->smote_k;
    const int folds = spec->cv_folds > 0 ? spec->cv_folds : 5;
    json grid_overrides = json::object();
    if (spec->grid_json && spec->grid_json[0]) {
      try {
        grid_overrides = json::parse(spec->grid_json);
      } catch (const json::exception& e) {
        fail(ErrorCode::Config, std::string("grid_json: ") + e.what());
      }
    }

    const CellInput input = build_cell_input(train->ds, kind, variant, source);
    const std::vector<GridCell> grid = grid_from_json(algorithm, grid_overrides);
    const CvResult cv = grid_search(input, algorithm, grid, pipeline_config, spec->seed, folds);

    std::vector<size_t> rows(input.n_rows());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const FittedPipeline pipeline = fit_pipeline(input, rows, pipeline_config);
    const Matrix x = apply_pipeline(pipeline, input, rows);
    const ClassWeights weights = compute_class_weights(input.y);

    ModelBundle bundle;
    bundle.algorithm = algorithm;
    bundle.feature_set = kind;
    bundle.variant = variant;
    bundle.winning_params = cv.cells[static_cast<size_t>(cv.winner)].params;
    bundle.pipeline = pipeline;
    bundle.demo_names = input.demo_names;
    bundle.model = fit_cell(grid[static_cast<size_t>(cv.winner)], x, input.y, weights,
                            pipeline_config.smote_k, spec->seed);
    bundle.seed = spec->seed;
    bundle.model_id = make_model_id(algorithm, kind, variant);
    bundle.deviation_notes = {
        "Published MLP solver option 'lbfgs' is excluded; adam and sgd cover the grid.",
        "Logistic-regression solver names map onto two optimizers: newton-cg/lbfgs -> Newton "
        "(l2/none), liblinear/saga -> proximal gradient (all penalties)."};
    save_bundle(bundle, out_bundle_path);

    if (cv_results_json_out) *cv_results_json_out = copy_string(cv.to_json().dump(2));
    return VB_OK;
  });
}

vb_status vb_bundle_load(const char* path, vb_bundle** out) {
  if (!path || !out) return invalid("vb_bundle_load: NULL argument");
  return guarded([&] {
    auto* handle = new vb_bundle{load_bundle(path)};
    *out = handle;
    return VB_OK;
  });
}

void vb_bundle_free(vb_bundle* bundle) { delete bundle; }

const char* vb_bundle_model_id(const vb_bundle* bundle) {
  return bundle ? bundle->bundle.model_id.c_str() : "";
}

vb_status vb_bundle_predict_file(const vb_bundle* bundle, const char* wav_path,
                                 const char* demographics_json, double* score_out,
                                 int* label_out) {
  if (!bundle || !wav_path || !score_out || !label_out) {
    return invalid("vb_bundle_predict_file: NULL argument");
  }
  return guarded([&] {
    const ModelBundle& b = bundle->bundle;
    if (b.feature_set == FeatureKind::Embedding) {
      fail(ErrorCode::Unsupported,
           "embedding bundles predict from precomputed per-id vectors; use vb_evaluate");
    }

    json demo = json::object();
    if (demographics_json && demographics_json[0]) {
      try {
        demo = json::parse(demographics_json);
      } catch (const json::exception& e) {
        fail(ErrorCode::Format, std::string("demographics_json: ") + e.what());
      }
    }

    CellInput input;
    input.feature_set = b.feature_set;
    const Recording rec = load_recording_16k(wav_path);
    if (b.feature_set == FeatureKind::Mfcc) {
      input.mfcc.push_back(mfcc_features(rec));
    } else {
      const std::vector<double> vec = extract_acoustic(rec);
      input.audio = Matrix(1, vec.size());
      std::copy(vec.begin(), vec.end(), input.audio.row(0));
    }

    // Demographic/symptom vector in the bundle's recorded column order.
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    input.demo = Matrix(1, b.demo_names.size());
    for (size_t c = 0; c < b.demo_names.size(); ++c) {
      const std::string& name = b.demo_names[c];
      double value = kNaN;
      if (name == "age" && demo.contains("age")) value = demo.at("age").get<double>();
      else if (name == "sex" && demo.contains("sex")) {
        const std::string sex = lowercase(demo.at("sex").get<std::string>());
        if (sex == "male" || sex == "m") value = 1.0;
        else if (sex == "female" || sex == "f") value = 0.0;
        else fail(ErrorCode::RowError, "demographics_json: unknown sex '" + sex + "'");
      } else if (demo.contains("symptoms") && demo.at("symptoms").contains(name)) {
        value = demo.at("symptoms").at(name).get<double>();
      } else if (demo.contains(name)) {
        value = demo.at(name).get<double>();
      }
      input.demo.at(0, c) = value;
    }
    input.y = {0};

    const BundlePredictions pred = bundle_predict(b, input, {0});
    *score_out = pred.scores[0];
    *label_out = pred.labels[0];
    return VB_OK;
  });
}

namespace {

// Shared predict path for evaluate/fairness.
BundlePredictions predict_dataset(const ModelBundle& bundle, const LabeledDataset& ds,
                                  const vb_eval_options* options, EmbeddingSet* storage) {
  FeatureSource source;
  if (options) {
    source.audio_root = string_or_empty(options->audio_root);
    if (options->embeddings_path) {
      *storage = load_embeddings(options->embeddings_path);
      source.embeddings = storage;
    }
  }
  const CellInput input = build_cell_input(ds, bundle.feature_set, bundle.variant, source);
  std::vector<size_t> rows(input.n_rows());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return bundle_predict(bundle, input, rows);
}

}  // namespace

vb_status vb_evaluate(const vb_bundle* bundle, const vb_dataset* test,
                      const vb_eval_options* options, char** metrics_json_out) {
  if (!bundle || !test || !metrics_json_out) return invalid("vb_evaluate: NULL argument");
  return guarded([&] {
    EmbeddingSet storage;
    const BundlePredictions pred = predict_dataset(bundle->bundle, test->ds, options, &storage);
    std::vector<int> y;
    for (const auto& row : test->ds.rows) y.push_back(row.label == Label::Malignant ? 1 : 0);
    const int resamples =
        options && options->bootstrap_resamples > 0 ? options->bootstrap_resamples : 1000;
    const uint64_t seed = options ? options->seed : 0;
    const MetricReport report = evaluate_predictions(y, pred.labels, pred.scores, resamples, seed);
    *metrics_json_out =
        copy_string(metric_report_to_json(report, bundle->bundle.model_id, "test").dump(2));
    return VB_OK;
  });
}

vb_status vb_fairness(const vb_bundle* bundle, const vb_dataset* test,
                      const vb_eval_options* options, char** fairness_json_out) {
  if (!bundle || !test || !fairness_json_out) return invalid("vb_fairness: NULL argument");
  return guarded([&] {
    EmbeddingSet storage;
    const BundlePredictions pred = predict_dataset(bundle->bundle, test->ds, options, &storage);
    std::vector<bool> male, correct;
    std::vector<double> ages, ages_correct, ages_incorrect;
    for (size_t r = 0; r < test->ds.rows.size(); ++r) {
      const auto& row = test->ds.rows[r];
      male.push_back(row.sex == Sex::Male);
      ages.push_back(static_cast<double>(row.age));
      const int truth = row.label == Label::Malignant ? 1 : 0;
      const bool is_correct = pred.labels[r] == truth;
      correct.push_back(is_correct);
      (is_correct ? ages_correct : ages_incorrect).push_back(static_cast<double>(row.age));
    }
    const FairnessReport report = fairness_battery(male, ages, correct);
    const bool supplementary = options && options->supplementary;
    *fairness_json_out = copy_string(fairness_to_json(report, bundle->bundle.model_id, "test",
                                                      supplementary, &ages_correct, &ages_incorrect)
                                         .dump(2));
    return VB_OK;
  });
}

vb_status vb_time_model(const vb_bundle* bundle, const vb_dataset* files, const char* audio_root,
                        const char* embeddings_path, int repeats, const char* out_csv_path) {
  if (!bundle || !files || !out_csv_path) return invalid("vb_time_model: NULL argument");
  return guarded([&] {
    EmbeddingSet storage;
    const EmbeddingSet* embeddings = nullptr;
    if (embeddings_path) {
      storage = load_embeddings(embeddings_path);
      embeddings = &storage;
    }
    const TimingReport report =
        time_model(bundle->bundle, files->ds, string_or_empty(audio_root), embeddings, repeats);
    write_timing(out_csv_path, report);
    return VB_OK;
  });
}

vb_status vb_benchmark_run(const char* config_json_path, const char* out_dir, int jobs_override,
                           char** summary_json_out) {
  if (!config_json_path || !out_dir) return invalid("vb_benchmark_run: NULL argument");
  return guarded([&] {
    RunConfig config = load_run_config(config_json_path);
    if (jobs_override > 0) config.jobs = jobs_override;
    const BenchmarkResult result = run_benchmark(config, out_dir);
    if (summary_json_out) {
      std::ifstream in(std::string(out_dir) + "/run_summary.json");
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      *summary_json_out = copy_string(text);
    }
    if (!result.all_ok()) {
      std::string failed;
      for (const auto& cell : result.cells) {
        if (!cell.ok) failed += (failed.empty() ? "" : ", ") + cell.model_id;
      }
      g_last_error = "benchmark finished with failed cells: " + failed;
      return VB_E_PARTIAL;
    }
    return VB_OK;
  });
}

vb_status vb_render_report(const char* run_dir, const char* out_markdown_path) {
  if (!run_dir || !out_markdown_path) return invalid("vb_render_report: NULL argument");
  return guarded([&] {
    const std::string report = render_report(run_dir);
    std::ofstream out(out_markdown_path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, std::string("cannot write ") + out_markdown_path);
    out << report;
    if (!out) fail(ErrorCode::Io, std::string("write failed: ") + out_markdown_path);
    return VB_OK;
  });
}

}  // extern "C"
