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

#include "benchmark.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "assemble.hpp"
#include "error.hpp"
#include "timing.hpp"

namespace voicebench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t derive_seed(uint64_t base, const std::string& tag) { return base ^ fnv1a(tag); }

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

void write_json_file(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json test_result_to_json(const TestResult& r) {
  json j{{"test", r.test_name}, {"computable", r.computable}};
  if (r.computable) {
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    if (r.degenerate) j["degenerate"] = true;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

struct EvalSet {
  std::string name;
  LabeledDataset ds;
  FeatureSource source;
  EmbeddingSet embeddings;         // owned storage for source pointers
  EmbeddingSet external_acoustic;  // owned storage
  bool has_embeddings = false;
};

// Audio features of one dataset for one feature kind, shared across cells.
struct AudioBlock {
  std::vector<Matrix> mfcc;
  Matrix fixed;
  std::vector<std::string> names;
};

AudioBlock build_audio_block(const EvalSet& set, FeatureKind kind) {
  // Variant does not matter for the audio side; reuse the assembler with the
  // voice-only variant.
  const CellInput built = build_cell_input(set.ds, kind, Variant::Voice, set.source);
  AudioBlock block;
  block.mfcc = built.mfcc;
  block.fixed = built.audio;
  block.names = built.audio_names;
  return block;
}

CellInput make_variant_input(const EvalSet& set, const AudioBlock& block, FeatureKind kind,
                             Variant variant) {
  CellInput input;
  input.feature_set = kind;
  input.mfcc = block.mfcc;
  input.audio = block.fixed;
  input.audio_names = block.names;
  input.demo_names = demo_block_names(set.ds, variant);
  input.demo = Matrix(set.ds.rows.size(), input.demo_names.size());
  for (size_t r = 0; r < set.ds.rows.size(); ++r) {
    const std::vector<double> values = demo_block_values(set.ds.rows[r], set.ds, variant);
    std::copy(values.begin(), values.end(), input.demo.row(r));
  }
  for (const auto& row : set.ds.rows) input.y.push_back(row.label == Label::Malignant ? 1 : 0);
  return input;
}

std::vector<size_t> all_rows(size_t n) {
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

json metric_report_to_json(const MetricReport& report, const std::string& model_id,
                           const std::string& test_set) {
  auto metric = [](const MetricWithCi& m) {
    json j{{"point", m.point}, {"ci_low", m.ci_low}, {"ci_high", m.ci_high}};
    if (m.skipped_resamples > 0) j["skipped_resamples"] = m.skipped_resamples;
    return j;
  };
  return json{{"model_id", model_id},
              {"test_set", test_set},
              {"n", report.n},
              {"confusion",
               {{"tp", report.cm.tp}, {"fn", report.cm.fn}, {"tn", report.cm.tn}, {"fp", report.cm.fp}}},
              {"balanced_accuracy", metric(report.balanced_accuracy)},
              {"sensitivity", metric(report.sensitivity)},
              {"specificity", metric(report.specificity)},
              {"auroc", metric(report.auroc)},
              {"bootstrap", {{"resamples", report.n_resamples}, {"seed", report.seed}, {"method", "percentile"}}}};
}

json fairness_to_json(const FairnessReport& report, const std::string& model_id,
                      const std::string& test_set, bool supplementary,
                      const std::vector<double>* ages_correct,
                      const std::vector<double>* ages_incorrect) {
  auto age_summary = [](const GroupAgeSummary& s) {
    return json{{"n", s.n}, {"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
  };
  json j{{"model_id", model_id},
         {"test_set", test_set},
         {"n_correct", report.n_correct},
         {"n_incorrect", report.n_incorrect},
         {"gender",
          {{"table",
            {{report.gender_table.a, report.gender_table.b},
             {report.gender_table.c, report.gender_table.d}}},
           {"rows", "male, female"},
           {"columns", "correct, incorrect"},
           {"fisher", test_result_to_json(report.gender)}}},
         {"age",
          {{"welch_t", test_result_to_json(report.age)},
           {"correct", age_summary(report.age_correct)},
           {"incorrect", age_summary(report.age_incorrect)}}}};
  if (supplementary && ages_correct && ages_incorrect) {
    j["supplementary"] = {{"ages_correct", *ages_correct}, {"ages_incorrect", *ages_incorrect}};
  }
  return j;
}

json comparison_to_json(const ComparisonReport& report) {
  return json{{"age_benign_mwu", test_result_to_json(report.age_benign)},
              {"age_malignant_mwu", test_result_to_json(report.age_malignant)},
              {"gender_benign_fisher", test_result_to_json(report.gender_benign)},
              {"gender_malignant_fisher", test_result_to_json(report.gender_malignant)},
              {"duration_a_mwu", test_result_to_json(report.duration_a)},
              {"duration_b_mwu", test_result_to_json(report.duration_b)},
              {"prevalence_a", report.prevalence_a},
              {"prevalence_b", report.prevalence_b}};
}

BenchmarkResult run_benchmark(const RunConfig& config, const std::string& out_dir) {
  const fs::path run_dir(out_dir);
  fs::create_directories(run_dir / "cells");

  // ---- Load datasets -------------------------------------------------------
  const LabelMap label_map = config.label_map.empty() ? LabelMap{} : load_label_map(config.label_map);
  const std::vector<std::string> symptoms =
      config.symptom_schema.empty() ? std::vector<std::string>{}
                                    : load_symptom_schema(config.symptom_schema);

  LabeledDataset train_ds, holdout_ds;
  std::vector<std::string> warnings;
  if (!config.manifest.empty()) {
    LoadResult loaded = load_manifest(config.manifest, label_map, symptoms);
    warnings = loaded.warnings;
    auto [train, test] =
        stratified_split(loaded.dataset, config.test_fraction, derive_seed(config.seed, "split"));
    train_ds = std::move(train);
    holdout_ds = std::move(test);
    write_manifest((run_dir / "train_split.csv").string(), train_ds);
    write_manifest((run_dir / "holdout_split.csv").string(), holdout_ds);
  } else {
    LoadResult train_loaded = load_manifest(config.train_manifest, label_map, symptoms);
    LoadResult test_loaded = load_manifest(config.test_manifest, label_map, symptoms);
    warnings = train_loaded.warnings;
    warnings.insert(warnings.end(), test_loaded.warnings.begin(), test_loaded.warnings.end());
    train_ds = std::move(train_loaded.dataset);
    holdout_ds = std::move(test_loaded.dataset);
  }

  const bool need_embeddings =
      std::count(config.feature_sets.begin(), config.feature_sets.end(), FeatureKind::Embedding) > 0;

  EvalSet train_set;
  train_set.name = "train";
  train_set.ds = train_ds;
  train_set.source.audio_root = config.audio_root;
  if (!config.embeddings.empty()) {
    train_set.embeddings = load_embeddings(config.embeddings);
    train_set.source.embeddings = &train_set.embeddings;
    train_set.has_embeddings = true;
  }
  if (!config.acoustic_vectors.empty()) {
    train_set.external_acoustic = load_embeddings(config.acoustic_vectors);
    train_set.source.external_acoustic = &train_set.external_acoustic;
  }
  if (need_embeddings && !train_set.has_embeddings) {
    fail(ErrorCode::Config, "feature set 'embedding' selected but no embeddings file configured");
  }

  EvalSet holdout_set;
  holdout_set.name = "holdout";
  holdout_set.ds = holdout_ds;
  holdout_set.source = train_set.source;  // same files/backing stores

  std::vector<EvalSet> external_sets;
  for (const auto& spec : config.external) {
    EvalSet set;
    set.name = spec.name;
    const std::vector<std::string> ext_symptoms =
        spec.symptom_schema.empty() ? std::vector<std::string>{}
                                    : load_symptom_schema(spec.symptom_schema);
    LoadResult loaded = load_manifest(spec.manifest, label_map, ext_symptoms);
    for (const auto& w : loaded.warnings) warnings.push_back(spec.name + ": " + w);
    set.ds = std::move(loaded.dataset);
    set.source.audio_root = spec.audio_root;
    if (!spec.embeddings.empty()) {
      set.embeddings = load_embeddings(spec.embeddings);
      set.source.embeddings = &set.embeddings;
      set.has_embeddings = true;
    }
    if (!spec.acoustic_vectors.empty()) {
      set.external_acoustic = load_embeddings(spec.acoustic_vectors);
      set.source.external_acoustic = &set.external_acoustic;
    }
    external_sets.push_back(std::move(set));
  }

  // ---- Shared audio features ----------------------------------------------
  std::map<FeatureKind, AudioBlock> train_audio, holdout_audio;
  std::map<std::string, std::map<FeatureKind, AudioBlock>> external_audio;
  for (FeatureKind kind : config.feature_sets) {
    train_audio[kind] = build_audio_block(train_set, kind);
    holdout_audio[kind] = build_audio_block(holdout_set, kind);
    for (const auto& set : external_sets) {
      if (kind == FeatureKind::Embedding && !set.has_embeddings) continue;  // skipped later
      external_audio[set.name][kind] = build_audio_block(set, kind);
    }
  }

  // ---- Cell list -------------------------------------------------------------
  struct CellSpec {
    Algorithm algorithm;
    FeatureKind kind;
    Variant variant;
    std::string model_id;
  };
  std::vector<CellSpec> cells;
  for (Algorithm a : config.algorithms) {
    for (FeatureKind f : config.feature_sets) {
      for (Variant v : config.variants) {
        cells.push_back({a, f, v, make_model_id(a, f, v)});
      }
    }
  }

  BenchmarkResult result;
  result.run_dir = run_dir.string();
  result.cells.resize(cells.size());

  const std::vector<std::string> standing_deviations = {
      "Published MLP solver option 'lbfgs' is excluded; adam and sgd cover the grid.",
      "Logistic-regression solver names map onto two optimizers: newton-cg/lbfgs -> Newton "
      "(l2/none), liblinear/saga -> proximal gradient (all penalties)."};

  std::atomic<size_t> next_cell{0};
  std::mutex log_mutex;

  auto run_cell = [&](size_t index) {
    const CellSpec& spec = cells[index];
    CellOutcome& outcome = result.cells[index];
    outcome.model_id = spec.model_id;
    const fs::path final_dir = run_dir / "cells" / spec.model_id;
    const fs::path tmp_dir = run_dir / "cells" / (spec.model_id + ".tmp");

    try {
      fs::remove_all(tmp_dir);
      fs::remove_all(final_dir);
      fs::create_directories(tmp_dir);

      const CellInput train_input =
          make_variant_input(train_set, train_audio.at(spec.kind), spec.kind, spec.variant);

      const uint64_t cv_seed = derive_seed(config.seed, "cv/" + spec.model_id);
      const std::vector<GridCell> grid = grid_from_json(spec.algorithm, config.grid_overrides);
      const CvResult cv = grid_search(train_input, spec.algorithm, grid, config.pipeline, cv_seed,
                                      config.cv_folds);
      write_json_file(tmp_dir / "cv_results.json", cv.to_json());

      // Refit the winner on the full training set.
      const std::vector<size_t> rows = all_rows(train_input.n_rows());
      const FittedPipeline pipeline = fit_pipeline(train_input, rows, config.pipeline);
      const Matrix x_train = apply_pipeline(pipeline, train_input, rows);
      const ClassWeights weights = compute_class_weights(train_input.y);
      const uint64_t fit_seed = derive_seed(config.seed, "fit/" + spec.model_id);
      std::unique_ptr<Model> model =
          fit_cell(grid[static_cast<size_t>(cv.winner)], x_train, train_input.y, weights,
                   config.pipeline.smote_k, fit_seed);

      ModelBundle bundle;
      bundle.algorithm = spec.algorithm;
      bundle.feature_set = spec.kind;
      bundle.variant = spec.variant;
      bundle.winning_params = cv.cells[static_cast<size_t>(cv.winner)].params;
      bundle.pipeline = pipeline;
      bundle.demo_names = train_input.demo_names;
      bundle.model = std::move(model);
      bundle.seed = config.seed;
      bundle.deviation_notes = standing_deviations;
      bundle.model_id = spec.model_id;
      save_bundle(bundle, (tmp_dir / "bundle.vb").string());

      // ---- Evaluations ----
      auto evaluate_on = [&](const EvalSet& set, const AudioBlock& block) {
        const CellInput input = make_variant_input(set, block, spec.kind, spec.variant);
        const std::vector<size_t> eval_rows = all_rows(input.n_rows());
        const BundlePredictions pred = bundle_predict(bundle, input, eval_rows);
        const uint64_t boot_seed = derive_seed(config.seed, "boot/" + spec.model_id + "/" + set.name);
        const MetricReport report = evaluate_predictions(
            input.y, pred.labels, pred.scores, config.bootstrap_resamples, boot_seed);
        write_json_file(tmp_dir / ("metrics_" + set.name + ".json"),
                        metric_report_to_json(report, spec.model_id, set.name));
        return pred;
      };

      const BundlePredictions holdout_pred = evaluate_on(holdout_set, holdout_audio.at(spec.kind));
      outcome.evaluations.push_back({"holdout", true, ""});

      // Fairness battery on the holdout, as in the published protocol.
      {
        std::vector<bool> male, correct;
        std::vector<double> ages;
        for (size_t r = 0; r < holdout_set.ds.rows.size(); ++r) {
          male.push_back(holdout_set.ds.rows[r].sex == Sex::Male);
          ages.push_back(static_cast<double>(holdout_set.ds.rows[r].age));
          const int truth = holdout_set.ds.rows[r].label == Label::Malignant ? 1 : 0;
          correct.push_back(holdout_pred.labels[r] == truth);
        }
        const FairnessReport fairness = fairness_battery(male, ages, correct);
        write_json_file(tmp_dir / "fairness_holdout.json",
                        fairness_to_json(fairness, spec.model_id, "holdout"));
      }

      for (const auto& set : external_sets) {
        if (variant_uses_symptoms(spec.variant) && !set.ds.has_symptoms()) {
          outcome.evaluations.push_back(
              {set.name, false, "external set lacks the symptom columns this variant needs"});
          continue;
        }
        if (spec.kind == FeatureKind::Embedding && !set.has_embeddings) {
          outcome.evaluations.push_back(
              {set.name, false, "external set has no precomputed embeddings"});
          continue;
        }
        evaluate_on(set, external_audio.at(set.name).at(spec.kind));
        outcome.evaluations.push_back({set.name, true, ""});
      }

      if (config.timing_repeats > 0) {
        const TimingReport timing =
            time_model(bundle, holdout_set.ds, config.audio_root,
                       holdout_set.source.embeddings, config.timing_repeats);
        write_timing((tmp_dir / "timing.csv").string(), timing);
      }

      json eval_json = json::array();
      for (const auto& e : outcome.evaluations) {
        json ej{{"test_set", e.test_set}, {"evaluated", e.evaluated}};
        if (!e.skip_reason.empty()) ej["skip_reason"] = e.skip_reason;
        eval_json.push_back(std::move(ej));
      }
      write_json_file(tmp_dir / "evaluations.json", eval_json);

      fs::rename(tmp_dir, final_dir);
      outcome.ok = true;
    } catch (const Error& e) {
      outcome.ok = false;
      outcome.error = e.what();
      std::error_code ec;
      fs::remove_all(tmp_dir, ec);
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = std::string("internal: ") + e.what();
      std::error_code ec;
      fs::remove_all(tmp_dir, ec);
    }
    std::lock_guard<std::mutex> lock(log_mutex);
    fprintf(stderr, "[voicebench] cell %s: %s\n", spec.model_id.c_str(),
            outcome.ok ? "ok" : outcome.error.c_str());
  };

  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(cells.size())));
  if (jobs == 1) {
    for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const size_t i = next_cell.fetch_add(1);
          if (i >= cells.size()) break;
          run_cell(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // ---- Run summary -----------------------------------------------------------
  json cells_json = json::array();
  for (const auto& outcome : result.cells) {
    json cj{{"model_id", outcome.model_id}, {"ok", outcome.ok}};
    if (!outcome.error.empty()) cj["error"] = outcome.error;
    json evals = json::array();
    for (const auto& e : outcome.evaluations) {
      json ej{{"test_set", e.test_set}, {"evaluated", e.evaluated}};
      if (!e.skip_reason.empty()) ej["skip_reason"] = e.skip_reason;
      evals.push_back(std::move(ej));
    }
    cj["evaluations"] = evals;
    cells_json.push_back(std::move(cj));
  }
  json test_sets = json::array();
  test_sets.push_back("holdout");
  for (const auto& set : external_sets) test_sets.push_back(set.name);
  json summary{{"config", config.to_json()},
               {"cells", cells_json},
               {"test_sets", test_sets},
               {"deviation_notes", standing_deviations},
               {"warnings", warnings},
               {"train_rows", train_set.ds.rows.size()},
               {"holdout_rows", holdout_set.ds.rows.size()}};
  write_json_file(run_dir / "run_summary.json", summary);
  return result;
}

}  // namespace voicebench
