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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bundle.hpp"
#include "error.hpp"
#include "util.hpp"

using namespace voicebench;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// A realistic fitted bundle over random data for each algorithm.
ModelBundle make_bundle(Algorithm algorithm, uint64_t seed) {
  Rng rng(seed);
  const size_t n = 60, d = 6;
  Matrix X(n, d);
  std::vector<int> y;
  for (size_t r = 0; r < n; ++r) {
    y.push_back(r % 3 == 0 ? 1 : 0);
    for (size_t c = 0; c < d; ++c) X.at(r, c) = rng.next_normal() + (c == 1 ? y.back() : 0);
  }

  CellInput input;
  input.feature_set = FeatureKind::Acoustic;
  input.audio = X;
  for (size_t c = 0; c < d; ++c) input.audio_names.push_back("f" + std::to_string(c));
  input.demo = Matrix(n, 2);
  input.demo_names = {"age", "sex"};
  for (size_t r = 0; r < n; ++r) {
    input.demo.at(r, 0) = 40 + rng.next_below(40);
    input.demo.at(r, 1) = rng.next_double() < 0.5 ? 1.0 : 0.0;
  }
  input.y = y;

  std::vector<size_t> rows;
  for (size_t i = 0; i < n; ++i) rows.push_back(i);
  const FittedPipeline pipeline = fit_pipeline(input, rows, PipelineConfig{});
  const Matrix x = apply_pipeline(pipeline, input, rows);
  const ClassWeights weights = compute_class_weights(y);

  ModelBundle bundle;
  bundle.algorithm = algorithm;
  bundle.feature_set = FeatureKind::Acoustic;
  bundle.variant = Variant::VoiceDemo;
  bundle.pipeline = pipeline;
  bundle.demo_names = input.demo_names;
  bundle.seed = seed;
  bundle.deviation_notes = {"test bundle"};
  bundle.model_id = make_model_id(algorithm, FeatureKind::Acoustic, Variant::VoiceDemo);
  bundle.winning_params = {{"note", "fixed for test"}};
  switch (algorithm) {
    case Algorithm::LogReg: {
      LogRegParams p;
      p.penalty = LogRegParams::Penalty::ElasticNet;
      p.l1_ratio = 0.3;
      bundle.model = std::make_unique<LogRegModel>(fit_logreg(x, y, p, weights));
      break;
    }
    case Algorithm::Svm: {
      SvmParams p;
      p.kernel = SvmParams::Kernel::Rbf;
      bundle.model = std::make_unique<SvmModel>(fit_svm(x, y, p, weights));
      break;
    }
    case Algorithm::Mlp: {
      MlpParams p;
      p.hidden = {12};
      p.max_epochs = 25;
      bundle.model = std::make_unique<MlpModel>(fit_mlp(x, y, p, seed));
      break;
    }
  }
  return bundle;
}

CellInput random_eval_input(size_t n, uint64_t seed) {
  Rng rng(seed);
  CellInput input;
  input.feature_set = FeatureKind::Acoustic;
  input.audio = Matrix(n, 6);
  for (auto& v : input.audio.data) v = rng.next_normal();
  for (size_t c = 0; c < 6; ++c) input.audio_names.push_back("f" + std::to_string(c));
  input.demo = Matrix(n, 2);
  for (size_t r = 0; r < n; ++r) {
    input.demo.at(r, 0) = 50 + rng.next_below(30);
    input.demo.at(r, 1) = rng.next_double() < 0.5 ? 1.0 : 0.0;
  }
  input.demo_names = {"age", "sex"};
  input.y.assign(n, 0);
  return input;
}

}  // namespace

TEST_CASE("bundle round trip reproduces predictions bitwise") {
  for (const Algorithm algorithm : {Algorithm::LogReg, Algorithm::Svm, Algorithm::Mlp}) {
    const ModelBundle original = make_bundle(algorithm, 7);
    const std::string path = temp_path("vb_bundle_rt.vb");
    save_bundle(original, path);
    const ModelBundle loaded = load_bundle(path);

    CHECK(loaded.model_id == original.model_id);
    CHECK(loaded.algorithm == original.algorithm);
    CHECK(loaded.variant == original.variant);
    CHECK(loaded.demo_names == original.demo_names);
    CHECK(loaded.seed == original.seed);

    const CellInput eval = random_eval_input(100, 99);
    std::vector<size_t> rows;
    for (size_t i = 0; i < 100; ++i) rows.push_back(i);
    const BundlePredictions a = bundle_predict(original, eval, rows);
    const BundlePredictions b = bundle_predict(loaded, eval, rows);
    REQUIRE(a.scores.size() == b.scores.size());
    for (size_t i = 0; i < a.scores.size(); ++i) {
      CHECK(a.scores[i] == b.scores[i]);  // bit-exact
      CHECK(a.labels[i] == b.labels[i]);
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("tampered bundle fails its checksum") {
  const ModelBundle bundle = make_bundle(Algorithm::LogReg, 13);
  const std::string path = temp_path("vb_bundle_tamper.vb");
  save_bundle(bundle, path);

  // Flip one byte inside the body.
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(0, std::ios::end);
  const auto size = static_cast<long>(f.tellg());
  f.seekp(size - 20);
  char c;
  f.seekg(size - 20);
  f.read(&c, 1);
  f.seekp(size - 20);
  c = c == 'a' ? 'b' : 'a';
  f.write(&c, 1);
  f.close();

  try {
    load_bundle(path);
    FAIL("expected checksum error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Checksum);
  }
  std::remove(path.c_str());
}

TEST_CASE("future schema version is refused with both versions named") {
  const ModelBundle bundle = make_bundle(Algorithm::Svm, 17);
  const std::string path = temp_path("vb_bundle_future.vb");
  save_bundle(bundle, path);

  // Rewrite the schema line.
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  const std::string needle = "voicebench-bundle schema=1";
  content.replace(content.find(needle), needle.size(), "voicebench-bundle schema=9");
  std::ofstream(path, std::ios::binary) << content;

  try {
    load_bundle(path);
    FAIL("expected version error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Version);
    CHECK(std::string(e.what()).find('9') != std::string::npos);
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("non-bundle files are rejected") {
  const std::string path = temp_path("vb_not_bundle.vb");
  std::ofstream(path) << "{\"just\": \"json\"}\n";
  CHECK_THROWS_AS(load_bundle(path), Error);
  std::remove(path.c_str());
}
