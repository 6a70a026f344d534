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

// Command-line driver. Everything goes through the public C API in
// voicebench/voicebench.h; no core internals are linked here.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "voicebench/voicebench.h"

namespace {

// Exit codes: 0 success, 1 runtime/partial failure, 2 configuration error.
int exit_code_for(vb_status status) {
  switch (status) {
    case VB_OK:
      return 0;
    case VB_E_INVALID_ARGUMENT:
    case VB_E_SCHEMA:
    case VB_E_CONFIG:
      return 2;
    default:
      return 1;
  }
}

int report_failure(vb_status status) {
  fprintf(stderr, "error (%s): %s\n", vb_status_name(status), vb_last_error());
  return exit_code_for(status);
}

struct DatasetHandle {
  vb_dataset* ptr = nullptr;
  ~DatasetHandle() { vb_dataset_free(ptr); }
};

struct BundleHandle {
  vb_bundle* ptr = nullptr;
  ~BundleHandle() { vb_bundle_free(ptr); }
};

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int write_or_print(const std::string& out_path, const char* text) {
  if (out_path.empty()) {
    printf("%s\n", text);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    fprintf(stderr, "error (io): cannot write %s\n", out_path.c_str());
    return 1;
  }
  out << text << '\n';
  return 0;
}

std::string slurp_file(const std::string& path, bool* ok) {
  std::ifstream in(path, std::ios::binary);
  *ok = static_cast<bool>(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voicebench - benign vs. malignant voice pathology classification benchmark"};
  app.require_subcommand(1);
  app.fallthrough();

  // Global flags, readable from every subcommand.
  std::string g_config, g_audio_root, g_out;
  uint64_t g_seed = 42;
  int g_jobs = 1;
  app.add_option("--config", g_config, "JSON run configuration file")->configurable(false);
  app.add_option("--seed", g_seed, "random seed (default 42)");
  app.add_option("--audio-root", g_audio_root, "directory that audio_path entries resolve against");
  app.add_option("--jobs", g_jobs, "concurrent benchmark cells (default 1)");
  app.add_option("--out", g_out, "output file or directory");

  std::string manifest, label_map, schema, bundle_path, features, algorithm, variant;
  std::string embeddings, grid_path, manifest_b, audio_root_b, run_dir, cv_results_path;
  double test_fraction = 0.33;
  int bootstrap = 1000, repeats = 5, target_frames = 0;
  bool supplementary = false;

  auto* split = app.add_subcommand("split", "stratified train/test split of a manifest");
  split->add_option("--manifest", manifest, "input manifest CSV")->required();
  split->add_option("--label-map", label_map, "label map file ([malignant] heading)");
  split->add_option("--schema", schema, "symptom schema JSON");
  split->add_option("--test-fraction", test_fraction, "test fraction (default 0.33)");

  auto* extract = app.add_subcommand("extract", "write a feature table for a manifest");
  extract->add_option("--manifest", manifest, "input manifest CSV")->required();
  extract->add_option("--label-map", label_map, "label map file");
  extract->add_option("--schema", schema, "symptom schema JSON");
  extract->add_option("--features", features, "embedding | acoustic | mfcc")->required();
  extract->add_option("--embeddings", embeddings, "embedding interchange file");
  extract->add_option("--target-frames", target_frames,
                      "MFCC frame target (default: mean of this set)");

  auto* train = app.add_subcommand("train", "grid-search CV and fit one model bundle");
  train->add_option("--manifest", manifest, "training manifest CSV")->required();
  train->add_option("--label-map", label_map, "label map file");
  train->add_option("--schema", schema, "symptom schema JSON");
  train->add_option("--algorithm", algorithm, "svm | mlp | logreg")->required();
  train->add_option("--features", features, "embedding | acoustic | mfcc")->required();
  train->add_option("--variant", variant,
                    "voice | voice_demo | voice_symptoms | voice_demo_symptoms")
      ->required();
  train->add_option("--embeddings", embeddings, "embedding interchange file");
  train->add_option("--grid", grid_path, "grid override JSON file");
  train->add_option("--cv-results", cv_results_path, "where to write the CV result table JSON");

  auto* evaluate = app.add_subcommand("evaluate", "metrics with bootstrap CIs on a test manifest");
  evaluate->add_option("--bundle", bundle_path, "model bundle")->required();
  evaluate->add_option("--manifest", manifest, "test manifest CSV")->required();
  evaluate->add_option("--label-map", label_map, "label map file");
  evaluate->add_option("--schema", schema, "symptom schema JSON");
  evaluate->add_option("--embeddings", embeddings, "embedding interchange file");
  evaluate->add_option("--bootstrap", bootstrap, "bootstrap resamples (default 1000)");

  auto* fairness = app.add_subcommand("fairness", "sex/age vs correctness test battery");
  fairness->add_option("--bundle", bundle_path, "model bundle")->required();
  fairness->add_option("--manifest", manifest, "test manifest CSV")->required();
  fairness->add_option("--label-map", label_map, "label map file");
  fairness->add_option("--schema", schema, "symptom schema JSON");
  fairness->add_option("--embeddings", embeddings, "embedding interchange file");
  fairness->add_flag("--supplementary", supplementary, "emit per-group tabulations for plotting");

  auto* timing = app.add_subcommand("timing", "per-file prediction latency");
  timing->add_option("--bundle", bundle_path, "model bundle")->required();
  timing->add_option("--manifest", manifest, "manifest of files to time")->required();
  timing->add_option("--label-map", label_map, "label map file");
  timing->add_option("--schema", schema, "symptom schema JSON");
  timing->add_option("--embeddings", embeddings, "embedding interchange file");
  timing->add_option("--repeats", repeats, "timed repeats per file (default 5)");

  auto* compare = app.add_subcommand("compare-datasets", "age/sex/duration comparison battery");
  compare->add_option("--a", manifest, "first manifest CSV")->required();
  compare->add_option("--b", manifest_b, "second manifest CSV")->required();
  compare->add_option("--label-map", label_map, "label map file");
  compare->add_option("--audio-root-b", audio_root_b, "audio root of the second dataset");

  auto* benchmark = app.add_subcommand("benchmark", "run the full model matrix from a config");

  auto* report = app.add_subcommand("report", "render a run directory to Markdown");
  report->add_option("--run", run_dir, "benchmark run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (split->parsed()) {
    if (g_out.empty()) {
      fprintf(stderr, "error (config): split needs --out <dir>\n");
      return 2;
    }
    DatasetHandle ds;
    vb_status rc = vb_dataset_load(manifest.c_str(), opt(label_map), opt(schema), &ds.ptr);
    if (rc != VB_OK) return report_failure(rc);
    DatasetHandle tr, te;
    rc = vb_dataset_split(ds.ptr, test_fraction, g_seed, &tr.ptr, &te.ptr);
    if (rc != VB_OK) return report_failure(rc);
    rc = vb_dataset_save(tr.ptr, (g_out + "/train.csv").c_str());
    if (rc != VB_OK) return report_failure(rc);
    rc = vb_dataset_save(te.ptr, (g_out + "/test.csv").c_str());
    if (rc != VB_OK) return report_failure(rc);
    printf("train: %lld rows (%lld malignant)\ntest: %lld rows (%lld malignant)\n",
           static_cast<long long>(vb_dataset_rows(tr.ptr)),
           static_cast<long long>(vb_dataset_count(tr.ptr, 1)),
           static_cast<long long>(vb_dataset_rows(te.ptr)),
           static_cast<long long>(vb_dataset_count(te.ptr, 1)));
    return 0;
  }

  if (extract->parsed()) {
    if (g_out.empty()) {
      fprintf(stderr, "error (config): extract needs --out <table.csv>\n");
      return 2;
    }
    DatasetHandle ds;
    vb_status rc = vb_dataset_load(manifest.c_str(), opt(label_map), opt(schema), &ds.ptr);
    if (rc != VB_OK) return report_failure(rc);
    rc = vb_extract_features(ds.ptr, opt(g_audio_root), features.c_str(), opt(embeddings),
                             target_frames, g_out.c_str());
    if (rc != VB_OK) return report_failure(rc);
    printf("wrote %s\n", g_out.c_str());
    return 0;
  }

  if (train->parsed()) {
    if (g_out.empty()) {
      fprintf(stderr, "error (config): train needs --out <bundle.vb>\n");
      return 2;
    }
    DatasetHandle ds;
    vb_status rc = vb_dataset_load(manifest.c_str(), opt(label_map), opt(schema), &ds.ptr);
    if (rc != VB_OK) return report_failure(rc);

    std::string grid_json;
    if (!grid_path.empty()) {
      bool ok = false;
      grid_json = slurp_file(grid_path, &ok);
      if (!ok) {
        fprintf(stderr, "error (io): cannot read grid file %s\n", grid_path.c_str());
        return 2;
      }
    }
    vb_train_spec spec{};
    spec.algorithm = algorithm.c_str();
    spec.feature_set = features.c_str();
    spec.variant = variant.c_str();
    spec.audio_root = opt(g_audio_root);
    spec.embeddings_path = opt(embeddings);
    spec.grid_json = grid_json.empty() ? nullptr : grid_json.c_str();
    spec.seed = g_seed;

    char* cv_json = nullptr;
    rc = vb_train(ds.ptr, &spec, g_out.c_str(), &cv_json);
    if (rc != VB_OK) return report_failure(rc);
    if (!cv_results_path.empty()) {
      const int wrc = write_or_print(cv_results_path, cv_json);
      if (wrc != 0) {
        vb_string_free(cv_json);
        return wrc;
      }
    }
    vb_string_free(cv_json);
    printf("wrote %s\n", g_out.c_str());
    return 0;
  }

  if (evaluate->parsed() || fairness->parsed()) {
    BundleHandle bundle;
    vb_status rc = vb_bundle_load(bundle_path.c_str(), &bundle.ptr);
    if (rc != VB_OK) return report_failure(rc);
    DatasetHandle ds;
    rc = vb_dataset_load(manifest.c_str(), opt(label_map), opt(schema), &ds.ptr);
    if (rc != VB_OK) return report_failure(rc);

    vb_eval_options options{};
    options.audio_root = opt(g_audio_root);
    options.embeddings_path = opt(embeddings);
    options.bootstrap_resamples = bootstrap;
    options.seed = g_seed;
    options.supplementary = supplementary ? 1 : 0;

    char* json_out = nullptr;
    rc = evaluate->parsed() ? vb_evaluate(bundle.ptr, ds.ptr, &options, &json_out)
                            : vb_fairness(bundle.ptr, ds.ptr, &options, &json_out);
    if (rc != VB_OK) return report_failure(rc);
    const int wrc = write_or_print(g_out, json_out);
    vb_string_free(json_out);
    return wrc;
  }

  if (timing->parsed()) {
    if (g_out.empty()) {
      fprintf(stderr, "error (config): timing needs --out <timing.csv>\n");
      return 2;
    }
    BundleHandle bundle;
    vb_status rc = vb_bundle_load(bundle_path.c_str(), &bundle.ptr);
    if (rc != VB_OK) return report_failure(rc);
    DatasetHandle ds;
    rc = vb_dataset_load(manifest.c_str(), opt(label_map), opt(schema), &ds.ptr);
    if (rc != VB_OK) return report_failure(rc);
    rc = vb_time_model(bundle.ptr, ds.ptr, opt(g_audio_root), opt(embeddings), repeats,
                       g_out.c_str());
    if (rc != VB_OK) return report_failure(rc);
    printf("wrote %s\n", g_out.c_str());
    return 0;
  }

  if (compare->parsed()) {
    DatasetHandle a, b;
    vb_status rc = vb_dataset_load(manifest.c_str(), opt(label_map), nullptr, &a.ptr);
    if (rc != VB_OK) return report_failure(rc);
    rc = vb_dataset_load(manifest_b.c_str(), opt(label_map), nullptr, &b.ptr);
    if (rc != VB_OK) return report_failure(rc);
    char* json_out = nullptr;
    rc = vb_compare_datasets(a.ptr, b.ptr, opt(g_audio_root), opt(audio_root_b), &json_out);
    if (rc != VB_OK) return report_failure(rc);
    const int wrc = write_or_print(g_out, json_out);
    vb_string_free(json_out);
    return wrc;
  }

  if (benchmark->parsed()) {
    if (g_config.empty() || g_out.empty()) {
      fprintf(stderr, "error (config): benchmark needs --config <run.json> and --out <dir>\n");
      return 2;
    }
    char* summary = nullptr;
    const vb_status rc = vb_benchmark_run(g_config.c_str(), g_out.c_str(), g_jobs, &summary);
    if (summary) {
      printf("%s\n", summary);
      vb_string_free(summary);
    }
    if (rc != VB_OK) return report_failure(rc);
    return 0;
  }

  if (report->parsed()) {
    if (g_out.empty()) {
      fprintf(stderr, "error (config): report needs --out <report.md>\n");
      return 2;
    }
    const vb_status rc = vb_render_report(run_dir.c_str(), g_out.c_str());
    if (rc != VB_OK) return report_failure(rc);
    printf("wrote %s\n", g_out.c_str());
    return 0;
  }

  return 2;
}
