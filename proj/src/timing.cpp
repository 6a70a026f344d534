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

#include "timing.hpp"

#include <chrono>
#include <fstream>

#include "assemble.hpp"
#include "csv.hpp"
#include "error.hpp"

namespace voicebench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

StageSummary summarize_stage(const std::vector<double>& values) {
  StageSummary s;
  if (values.empty()) return s;
  s.min = percentile(values, 0);
  s.median = percentile(values, 50);
  s.p95 = percentile(values, 95);
  s.max = percentile(values, 100);
  return s;
}

}  // namespace

std::string cpu_description() {
  std::ifstream in("/proc/cpuinfo");
  std::string line, vendor, model;
  while (std::getline(in, line)) {
    const size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = trim(line.substr(0, colon));
    if (key == "model name") return trim(line.substr(colon + 1));  // full marketing name
    if (key == "vendor_id" && vendor.empty()) vendor = trim(line.substr(colon + 1));
    if (key == "model" && model.empty()) model = trim(line.substr(colon + 1));
  }
  if (!vendor.empty()) return vendor + (model.empty() ? "" : " model " + model);
  return "unknown CPU";
}

TimingReport time_model(const ModelBundle& bundle, const LabeledDataset& ds,
                        const std::string& audio_root, const EmbeddingSet* embeddings,
                        int repeats) {
  if (repeats < 1) fail(ErrorCode::InvalidArgument, "time_model: repeats must be >= 1");
  if (bundle.feature_set == FeatureKind::Embedding && !embeddings) {
    fail(ErrorCode::Config, "time_model: embedding bundle needs an embeddings file");
  }

  FeatureSource source;
  source.audio_root = audio_root;
  source.embeddings = embeddings;

  TimingReport report;
  report.model_id = bundle.model_id;
  report.repeats = repeats;
  report.cpu = cpu_description();

  for (const auto& row : ds.rows) {
    FileTiming ft;
    ft.file_id = row.id;

    // One prediction per (file, repeat); repeat 0 is the excluded warm-up.
    try {
      double first_score = 0.0;
      for (int rep = 0; rep <= repeats; ++rep) {
        StageTimes t;
        const auto t_total = Clock::now();

        CellInput input;
        input.feature_set = bundle.feature_set;
        const auto t_feat = Clock::now();
        if (bundle.feature_set == FeatureKind::Embedding) {
          const std::vector<double> pooled = embedding_features(source, row.id);
          input.audio = Matrix(1, pooled.size());
          std::copy(pooled.begin(), pooled.end(), input.audio.row(0));
          t.feature_extraction = seconds_since(t_feat);
        } else {
          const Recording rec =
              load_recording_16k(resolve_audio_path(audio_root, row.audio_path));
          const auto t_extract = Clock::now();
          if (bundle.feature_set == FeatureKind::Mfcc) {
            input.mfcc.push_back(mfcc_features(rec));
          } else {
            const std::vector<double> vec = acoustic_features(rec, source, row.id);
            input.audio = Matrix(1, vec.size());
            std::copy(vec.begin(), vec.end(), input.audio.row(0));
          }
          t.feature_extraction = seconds_since(t_extract);
        }

        const std::vector<double> demo = demo_block_values(row, ds, bundle.variant);
        input.demo = Matrix(1, demo.size());
        std::copy(demo.begin(), demo.end(), input.demo.row(0));
        input.y = {row.label == Label::Malignant ? 1 : 0};

        const auto t_predict = Clock::now();
        const BundlePredictions pred = bundle_predict(bundle, input, {0});
        t.predict_only = seconds_since(t_predict);
        t.end_to_end = seconds_since(t_total);

        if (rep == 0) {
          first_score = pred.scores[0];
          continue;  // warm-up excluded from the report
        }
        if (pred.scores[0] != first_score) {
          fail(ErrorCode::Internal, "timing produced non-deterministic predictions");
        }
        ft.repeats.push_back(t);
        ft.score = pred.scores[0];
        ft.label = pred.labels[0];
      }
    } catch (const Error& e) {
      ft.ok = false;
      ft.error = e.what();
      report.files.push_back(std::move(ft));
      continue;  // per-file failures do not stop the run
    }

    std::vector<double> e2e, feat, pred_only;
    for (const auto& t : ft.repeats) {
      e2e.push_back(t.end_to_end);
      feat.push_back(t.feature_extraction);
      pred_only.push_back(t.predict_only);
    }
    ft.median.end_to_end = percentile(e2e, 50);
    ft.median.feature_extraction = percentile(feat, 50);
    ft.median.predict_only = percentile(pred_only, 50);
    report.files.push_back(std::move(ft));
  }

  std::vector<double> e2e, feat, pred_only;
  for (const auto& ft : report.files) {
    if (!ft.ok) continue;
    e2e.push_back(ft.median.end_to_end);
    feat.push_back(ft.median.feature_extraction);
    pred_only.push_back(ft.median.predict_only);
  }
  report.end_to_end = summarize_stage(e2e);
  report.feature_extraction = summarize_stage(feat);
  report.predict_only = summarize_stage(pred_only);
  return report;
}

void write_timing(const std::string& path, const TimingReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out.precision(9);
  out << "model_id,file_id,stage,seconds\n";
  for (const auto& ft : report.files) {
    if (!ft.ok) {
      out << "# error," << ft.file_id << ",," << csv_quote(ft.error) << "\n";
      continue;
    }
    for (const auto& t : ft.repeats) {
      out << report.model_id << ',' << ft.file_id << ",end_to_end," << t.end_to_end << '\n';
      out << report.model_id << ',' << ft.file_id << ",feature_extraction," << t.feature_extraction
          << '\n';
      out << report.model_id << ',' << ft.file_id << ",predict_only," << t.predict_only << '\n';
    }
  }
  auto summary = [&](const char* stage, const StageSummary& s) {
    out << "# summary," << stage << ",min=" << s.min << ",median=" << s.median << ",p95=" << s.p95
        << ",max=" << s.max << '\n';
  };
  summary("end_to_end", report.end_to_end);
  summary("feature_extraction", report.feature_extraction);
  summary("predict_only", report.predict_only);
  out << "# repeats," << report.repeats << '\n';
  out << "# cpu," << report.cpu << '\n';
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace voicebench
