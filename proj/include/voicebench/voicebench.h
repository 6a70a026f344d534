/* Copyright 2026 The VoiceBench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* voicebench C API
 *
 * A benchmark toolkit for classifying benign vs. malignant voice pathologies
 * from sustained-vowel recordings plus optional demographics/symptoms.
 *
 * Conventions:
 *   - Every fallible call returns a vb_status; VB_OK is 0. On failure a
 *     human-readable message is available from vb_last_error() (thread-local).
 *   - Objects returned through out-parameters are owned by the caller and
 *     released with the matching *_free function.
 *   - Strings returned through char** out-parameters are heap-allocated and
 *     released with vb_string_free().
 *   - The malignant class is the positive class everywhere.
 */

#ifndef VOICEBENCH_VOICEBENCH_H_
#define VOICEBENCH_VOICEBENCH_H_

#include <stdint.h>

#if defined(_WIN32)
#if defined(VB_BUILD_SHARED)
#define VB_API __declspec(dllexport)
#else
#define VB_API __declspec(dllimport)
#endif
#else
#define VB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vb_status {
  VB_OK = 0,
  VB_E_INVALID_ARGUMENT = 1,
  VB_E_IO = 2,
  VB_E_FORMAT = 3,   /* malformed file contents (WAV, embeddings, bundle) */
  VB_E_SCHEMA = 4,   /* manifest/schema column problems */
  VB_E_ROW = 5,      /* a specific manifest row is invalid */
  VB_E_STATE = 6,    /* operation not valid in the current state */
  VB_E_NUMERIC = 7,  /* divergence or non-finite values */
  VB_E_UNSUPPORTED = 8,
  VB_E_CHECKSUM = 9, /* bundle corruption */
  VB_E_VERSION = 10, /* bundle schema version mismatch */
  VB_E_CONFIG = 11,  /* run configuration problems */
  VB_E_PARTIAL = 12, /* benchmark finished but some cells failed */
  VB_E_INTERNAL = 13
} vb_status;

VB_API const char* vb_version(void);     /* semantic version string */
VB_API int vb_abi_version(void);         /* bumped on breaking ABI changes */
VB_API const char* vb_status_name(vb_status status);
/* Message describing the most recent failure on this thread; never NULL. */
VB_API const char* vb_last_error(void);
VB_API void vb_string_free(char* text);

/* ---- Datasets ---------------------------------------------------------- */

typedef struct vb_dataset vb_dataset;

/* Loads a manifest CSV (columns: id, audio_path, pathology, sex, age, plus
 * optional packs_per_day / drinks_per_day and declared symptom columns).
 * label_map_path and symptom_schema_path may be NULL. Pathologies listed
 * under the label map's [malignant] heading map to the malignant class,
 * everything else to benign. */
VB_API vb_status vb_dataset_load(const char* manifest_csv, const char* label_map_path,
                                 const char* symptom_schema_path, vb_dataset** out);
VB_API void vb_dataset_free(vb_dataset* ds);
VB_API int64_t vb_dataset_rows(const vb_dataset* ds);
/* malignant != 0 counts the malignant class, otherwise benign. */
VB_API int64_t vb_dataset_count(const vb_dataset* ds, int malignant);

/* Stratified split: per-class test count = round(fraction * class size). */
VB_API vb_status vb_dataset_split(const vb_dataset* ds, double test_fraction, uint64_t seed,
                                  vb_dataset** train_out, vb_dataset** test_out);
VB_API vb_status vb_dataset_save(const vb_dataset* ds, const char* path);

/* Age (Mann-Whitney U) and sex (Fisher exact) comparisons per class between
 * two datasets, within-dataset duration tests and prevalences, as JSON.
 * Audio roots may be NULL when recordings are not available. */
VB_API vb_status vb_compare_datasets(const vb_dataset* a, const vb_dataset* b,
                                     const char* audio_root_a, const char* audio_root_b,
                                     char** report_json_out);

/* ---- Feature extraction ------------------------------------------------- */

/* Writes a feature table (id column + named features, NA for missing).
 * feature_set: "mfcc", "acoustic" or "embedding".
 *   - mfcc: target_frames <= 0 derives the frame target from this dataset.
 *   - embedding: embeddings_path must point to the interchange file
 *     (header "id,dim=<D>", then "id,v1,...,vD" lines); vectors are
 *     mean-pooled over frames.
 *   - acoustic: embeddings_path, when given, supplies externally computed
 *     dim-88 vectors through the same interchange format. */
VB_API vb_status vb_extract_features(const vb_dataset* ds, const char* audio_root,
                                     const char* feature_set, const char* embeddings_path,
                                     int target_frames, const char* out_table_path);

/* ---- Training ------------------------------------------------------------ */

typedef struct vb_train_spec {
  const char* algorithm;       /* "svm" | "mlp" | "logreg" */
  const char* feature_set;     /* "embedding" | "acoustic" | "mfcc" */
  const char* variant;         /* "voice" | "voice_demo" | "voice_symptoms" |
                                  "voice_demo_symptoms" */
  const char* audio_root;      /* NULL when paths are absolute */
  const char* embeddings_path; /* required for the embedding feature set */
  const char* grid_json;       /* optional grid override JSON text */
  uint64_t seed;
  int cv_folds;                /* <= 0 selects the default of 5 */
  int smote_k;                 /* <= 0 selects the default of 5 */
} vb_train_spec;

/* Grid search with stratified CV on the training dataset, refit of the
 * winning combination, bundle written to out_bundle_path. The full CV result
 * table is returned as JSON when cv_results_json_out is non-NULL. */
VB_API vb_status vb_train(const vb_dataset* train, const vb_train_spec* spec,
                          const char* out_bundle_path, char** cv_results_json_out);

/* ---- Bundles -------------------------------------------------------------- */

typedef struct vb_bundle vb_bundle;

VB_API vb_status vb_bundle_load(const char* path, vb_bundle** out);
VB_API void vb_bundle_free(vb_bundle* bundle);
/* Valid until the bundle is freed. */
VB_API const char* vb_bundle_model_id(const vb_bundle* bundle);

/* Single-file prediction for mfcc/acoustic bundles: decode, resample,
 * extract, preprocess, score. demographics_json (may be NULL for voice-only
 * bundles) example:
 *   {"age": 63, "sex": "male", "symptoms": {"hoarseness": 1},
 *    "packs_per_day": 2}
 * Missing values are imputed by the bundle's fitted states. Embedding
 * bundles are rejected with VB_E_UNSUPPORTED (their vectors are precomputed
 * per dataset id; use vb_evaluate). Labels: 1 malignant, 0 benign. */
VB_API vb_status vb_bundle_predict_file(const vb_bundle* bundle, const char* wav_path,
                                        const char* demographics_json, double* score_out,
                                        int* label_out);

/* ---- Evaluation ------------------------------------------------------------ */

typedef struct vb_eval_options {
  const char* audio_root;      /* NULL when paths are absolute */
  const char* embeddings_path; /* required for embedding bundles */
  int bootstrap_resamples;     /* <= 0 selects the default of 1000 */
  uint64_t seed;
  int supplementary;           /* fairness: include per-group tabulations */
} vb_eval_options;

/* Balanced accuracy, sensitivity, specificity and AUROC with 95% percentile
 * bootstrap confidence intervals, as JSON. */
VB_API vb_status vb_evaluate(const vb_bundle* bundle, const vb_dataset* test,
                             const vb_eval_options* options, char** metrics_json_out);

/* Fisher exact (sex vs correctness) and Welch t-test (age vs correctness)
 * battery over the bundle's predictions, as JSON. */
VB_API vb_status vb_fairness(const vb_bundle* bundle, const vb_dataset* test,
                             const vb_eval_options* options, char** fairness_json_out);

/* Per-file prediction latency (end-to-end / feature extraction / predict
 * only), single-threaded, one warm-up repeat excluded. Writes delimited text:
 * model_id,file_id,stage,seconds rows plus a '#'-prefixed summary block. */
VB_API vb_status vb_time_model(const vb_bundle* bundle, const vb_dataset* files,
                               const char* audio_root, const char* embeddings_path, int repeats,
                               const char* out_csv_path);

/* ---- Benchmark matrix ------------------------------------------------------- */

/* Runs the full (algorithm x feature set x variant) matrix described by a
 * JSON run configuration. Outputs land under out_dir (one directory per
 * model id plus run_summary.json). jobs_override > 0 replaces the config's
 * job count. Returns VB_E_PARTIAL when some cells failed; the summary JSON
 * (also written to run_summary.json) lists per-cell status. */
VB_API vb_status vb_benchmark_run(const char* config_json_path, const char* out_dir,
                                  int jobs_override, char** summary_json_out);

/* Renders a finished run directory into a Markdown report document. */
VB_API vb_status vb_render_report(const char* run_dir, const char* out_markdown_path);

#ifdef __cplusplus
}
#endif

#endif /* VOICEBENCH_VOICEBENCH_H_ */
