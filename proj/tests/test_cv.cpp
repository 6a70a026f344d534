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

#include <algorithm>
#include <map>

#include "cv.hpp"
#include "error.hpp"
#include "util.hpp"

using namespace voicebench;

namespace {

// Fixed-width audio cell input with a separating audio feature and an
// optional informative demo column.
CellInput make_input(int n, uint64_t seed, bool with_demo = false, double separation = 2.0) {
  Rng rng(seed);
  CellInput input;
  input.feature_set = FeatureKind::Acoustic;
  input.audio = Matrix(static_cast<size_t>(n), 4);
  input.audio_names = {"a0", "a1", "a2", "a3"};
  if (with_demo) {
    input.demo = Matrix(static_cast<size_t>(n), 2);
    input.demo_names = {"age", "sex"};
  } else {
    input.demo = Matrix(static_cast<size_t>(n), 0);
  }
  for (int i = 0; i < n; ++i) {
    const int label = i % 3 == 0 ? 1 : 0;
    const auto r = static_cast<size_t>(i);
    input.y.push_back(label);
    input.audio.at(r, 0) = separation * label + rng.next_normal();
    for (size_t c = 1; c < 4; ++c) input.audio.at(r, c) = rng.next_normal();
    if (with_demo) {
      input.demo.at(r, 0) = 40.0 + 20.0 * label + 5.0 * rng.next_normal();
      input.demo.at(r, 1) = rng.next_double() < (label ? 0.8 : 0.4) ? 1.0 : 0.0;
    }
  }
  return input;
}

}  // namespace

TEST_CASE("stratified k-fold") {
  SUBCASE("35 of a class over 5 folds lands 7 per fold") {
    std::vector<int> y(35, 1);
    y.insert(y.end(), 100, 0);
    const std::vector<int> folds = stratified_kfold(y, 5, 3);
    std::map<int, int> malignant_per_fold;
    for (size_t i = 0; i < 35; ++i) ++malignant_per_fold[folds[i]];
    for (const auto& [fold, count] : malignant_per_fold) CHECK(count == 7);
  }
  SUBCASE("12 samples over 5 folds spread 3,3,2,2,2") {
    std::vector<int> y(12, 1);
    y.insert(y.end(), 20, 0);
    const std::vector<int> folds = stratified_kfold(y, 5, 4);
    std::vector<int> counts(5, 0);
    for (size_t i = 0; i < 12; ++i) ++counts[static_cast<size_t>(folds[i])];
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<int>{2, 2, 2, 3, 3});
  }
  SUBCASE("every sample is in exactly one fold") {
    std::vector<int> y;
    for (int i = 0; i < 57; ++i) y.push_back(i % 4 == 0 ? 1 : 0);
    const std::vector<int> folds = stratified_kfold(y, 5, 5);
    for (int f : folds) {
      CHECK(f >= 0);
      CHECK(f < 5);
    }
  }
  SUBCASE("determinism") {
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) y.push_back(i % 2);
    CHECK(stratified_kfold(y, 5, 9) == stratified_kfold(y, 5, 9));
    CHECK(stratified_kfold(y, 5, 9) != stratified_kfold(y, 5, 10));
  }
  SUBCASE("class smaller than k fails") {
    std::vector<int> y(3, 1);
    y.insert(y.end(), 30, 0);
    CHECK_THROWS_AS(stratified_kfold(y, 5, 1), Error);
  }
}

TEST_CASE("default grids mirror the published table") {
  CHECK(default_grid(Algorithm::Svm).size() == 5 * 7 * 3 * 4);
  // lbfgs is excluded: 5 hidden x 2 activations x 2 solvers x 3 schedules.
  const auto mlp = default_grid(Algorithm::Mlp);
  CHECK(mlp.size() == 60);
  for (const auto& cell : mlp) CHECK(cell.valid);

  const auto logreg = default_grid(Algorithm::LogReg);
  CHECK(logreg.size() == 4 * 5 * 4 * 4 * 5);
  int invalid = 0;
  for (const auto& cell : logreg) invalid += cell.valid ? 0 : 1;
  // newton-cg/lbfgs cannot run l1/elasticnet: 2 penalties x 5 C x 2 solvers x 4 iters x 5 ratios.
  CHECK(invalid == 400);
}

TEST_CASE("grid overrides") {
  nlohmann::json overrides = {
      {"svm", {{"C", {1.0}}, {"gamma", {"scale"}}, {"degree", {3}}, {"kernel", {"rbf", "linear"}}}}};
  const auto grid = grid_from_json(Algorithm::Svm, overrides);
  CHECK(grid.size() == 2);
  CHECK(grid[0].params.at("kernel") == "rbf");
  CHECK(grid[1].params.at("kernel") == "linear");

  nlohmann::json bad = {{"svm", {{"kernel", {"quantum"}}}}};
  CHECK_THROWS_AS(grid_from_json(Algorithm::Svm, bad), Error);

  nlohmann::json lbfgs = {{"mlp", {{"solver", {"lbfgs"}}, {"hidden_layer_sizes", {{10}}}}}};
  const auto mlp_grid = grid_from_json(Algorithm::Mlp, lbfgs);
  for (const auto& cell : mlp_grid) {
    CHECK_FALSE(cell.valid);
    CHECK(cell.invalid_reason.find("lbfgs") != std::string::npos);
  }
}

TEST_CASE("grid search picks the planted winner") {
  const CellInput input = make_input(100, 21);
  // Cell A: sensible l2. Cell B: l1 so strong every weight is zeroed, leaving
  // a coin-flip intercept model.
  nlohmann::json overrides = {{"logreg",
                               {{"penalty", {"l2", "l1"}},
                                {"C", {1.0}},
                                {"solver", {"saga"}},
                                {"max_iterations", {200}},
                                {"l1_ratio", {0.0}}}}};
  auto grid = grid_from_json(Algorithm::LogReg, overrides);
  REQUIRE(grid.size() == 2);
  grid[1].logreg.C = 1e-6;  // cripple cell B
  grid[1].params["C"] = 1e-6;

  const CvResult result = grid_search(input, Algorithm::LogReg, grid, PipelineConfig{}, 11);
  CHECK(result.winner == 0);
  CHECK(result.cells[0].mean_score > result.cells[1].mean_score);
  CHECK(result.cells[0].fold_scores.size() == 5);

  // The reported mean is exactly the arithmetic mean of the fold scores.
  double mean = 0.0;
  for (double s : result.cells[0].fold_scores) mean += s;
  mean /= 5.0;
  CHECK(result.cells[0].mean_score == mean);
}

TEST_CASE("single-cell grid wins trivially") {
  const CellInput input = make_input(60, 31);
  nlohmann::json overrides = {{"logreg",
                               {{"penalty", {"l2"}},
                                {"C", {1.0}},
                                {"solver", {"lbfgs"}},
                                {"max_iterations", {100}},
                                {"l1_ratio", {0.0}}}}};
  const auto grid = grid_from_json(Algorithm::LogReg, overrides);
  REQUIRE(grid.size() == 1);
  const CvResult result = grid_search(input, Algorithm::LogReg, grid, PipelineConfig{}, 5);
  CHECK(result.winner == 0);
}

TEST_CASE("ties break to the first-enumerated cell") {
  const CellInput input = make_input(60, 41);
  nlohmann::json overrides = {{"logreg",
                               {{"penalty", {"l2"}},
                                {"C", {1.0, 1.0}},  // identical cells
                                {"solver", {"saga"}},
                                {"max_iterations", {200}},
                                {"l1_ratio", {0.0}}}}};
  const auto grid = grid_from_json(Algorithm::LogReg, overrides);
  REQUIRE(grid.size() == 2);
  const CvResult result = grid_search(input, Algorithm::LogReg, grid, PipelineConfig{}, 17);
  CHECK(result.cells[0].mean_score == result.cells[1].mean_score);
  CHECK(result.winner == 0);
}

TEST_CASE("grid search works for svm and mlp with smote") {
  const CellInput input = make_input(90, 51);
  {
    nlohmann::json overrides = {
        {"svm", {{"C", {1.0}}, {"gamma", {"scale"}}, {"degree", {3}}, {"kernel", {"linear"}}}}};
    const CvResult result =
        grid_search(input, Algorithm::Svm, grid_from_json(Algorithm::Svm, overrides), PipelineConfig{}, 7);
    CHECK(result.cells[static_cast<size_t>(result.winner)].mean_score > 0.7);
  }
  {
    nlohmann::json overrides = {{"mlp",
                                 {{"hidden_layer_sizes", {{16}}},
                                  {"activation", {"relu"}},
                                  {"solver", {"adam"}},
                                  {"learning_rate", {"constant"}}}}};
    const CvResult result =
        grid_search(input, Algorithm::Mlp, grid_from_json(Algorithm::Mlp, overrides), PipelineConfig{}, 7);
    CHECK(result.cells[static_cast<size_t>(result.winner)].mean_score > 0.7);
  }
}

TEST_CASE("cv is deterministic") {
  const CellInput input = make_input(80, 61, /*with_demo=*/true);
  nlohmann::json overrides = {{"mlp",
                               {{"hidden_layer_sizes", {{8}}},
                                {"activation", {"tanh"}},
                                {"solver", {"sgd"}},
                                {"learning_rate", {"constant", "adaptive"}}}}};
  const auto grid = grid_from_json(Algorithm::Mlp, overrides);
  const CvResult a = grid_search(input, Algorithm::Mlp, grid, PipelineConfig{}, 13);
  const CvResult b = grid_search(input, Algorithm::Mlp, grid, PipelineConfig{}, 13);
  CHECK(a.winner == b.winner);
  for (size_t c = 0; c < a.cells.size(); ++c) {
    CHECK(a.cells[c].fold_scores == b.cells[c].fold_scores);
  }
}

TEST_CASE("pipeline states are independent of validation rows") {
  // Mutating rows outside the training subset must leave every fitted state
  // bitwise unchanged.
  for (uint64_t trial = 0; trial < 20; ++trial) {
    CellInput input = make_input(50, 100 + trial);
    std::vector<size_t> train_rows, val_rows;
    const std::vector<int> folds = stratified_kfold(input.y, 5, trial);
    for (size_t i = 0; i < input.y.size(); ++i) {
      (folds[i] == 0 ? val_rows : train_rows).push_back(i);
    }

    const FittedPipeline before = fit_pipeline(input, train_rows, PipelineConfig{});
    Rng rng(trial * 7 + 1);
    for (size_t r : val_rows) {
      for (size_t c = 0; c < input.audio.cols; ++c) input.audio.at(r, c) = 1e3 * rng.next_normal();
    }
    const FittedPipeline after = fit_pipeline(input, train_rows, PipelineConfig{});

    CHECK(before.audio_imputer.fill == after.audio_imputer.fill);
    CHECK(before.audio_scaler.mean == after.audio_scaler.mean);
    CHECK(before.audio_scaler.stddev == after.audio_scaler.stddev);
    CHECK(before.selector.selected == after.selector.selected);
    CHECK(before.selector.importances == after.selector.importances);
  }
}

TEST_CASE("mfcc pipeline learns the frame target from training rows only") {
  CellInput input;
  input.feature_set = FeatureKind::Mfcc;
  input.audio_names.clear();
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const int label = i % 2;
    input.y.push_back(label);
    // Training rows get 60 or 80 frames; the held-out rows 200 frames.
    const size_t frames = i < 20 ? (i % 2 ? 80 : 60) : 200;
    Matrix m(20, frames);
    for (auto& v : m.data) v = rng.next_normal() + label;
    input.mfcc.push_back(std::move(m));
  }
  input.demo = Matrix(30, 0);
  for (size_t c = 0; c < 20u * 80u; ++c) input.audio_names.push_back("mfcc_" + std::to_string(c));

  std::vector<size_t> train_rows;
  for (size_t i = 0; i < 20; ++i) train_rows.push_back(i);
  const FittedPipeline pipeline = fit_pipeline(input, train_rows, PipelineConfig{});
  CHECK(pipeline.target_frames == 70);  // mean of {60, 80}

  std::vector<size_t> test_rows{20, 21, 22};
  const Matrix x = apply_pipeline(pipeline, input, test_rows);
  CHECK(x.rows == 3);
  CHECK(x.cols == pipeline.selector.selected.size());
}

TEST_CASE("lenient balanced accuracy flags missing classes") {
  bool missing = false;
  const double score = balanced_accuracy_lenient({1, 1, 1}, {1, 1, 0}, &missing);
  CHECK(missing);
  CHECK(score == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));

  const double full = balanced_accuracy_lenient({0, 0, 1, 1}, {0, 1, 1, 1}, &missing);
  CHECK_FALSE(missing);
  CHECK(full == doctest::Approx(0.75));
}
