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

#include <cmath>

#include "error.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "util.hpp"

using namespace voicebench;

namespace {

double train_accuracy(const Model& model, const Matrix& X, const std::vector<int>& y) {
  const std::vector<int> pred = model.predict(X);
  double correct = 0.0;
  for (size_t i = 0; i < y.size(); ++i) correct += pred[i] == y[i] ? 1.0 : 0.0;
  return correct / static_cast<double>(y.size());
}

std::pair<Matrix, std::vector<int>> two_moons(int n, double noise, uint64_t seed) {
  Rng rng(seed);
  Matrix X(static_cast<size_t>(n), 2);
  std::vector<int> y(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = M_PI * rng.next_double();
    const auto r = static_cast<size_t>(i);
    if (i % 2 == 0) {
      X.at(r, 0) = std::cos(t) + noise * rng.next_normal();
      X.at(r, 1) = std::sin(t) + noise * rng.next_normal();
      y[r] = 0;
    } else {
      X.at(r, 0) = 1.0 - std::cos(t) + noise * rng.next_normal();
      X.at(r, 1) = 0.5 - std::sin(t) + noise * rng.next_normal();
      y[r] = 1;
    }
  }
  return {X, y};
}

std::pair<Matrix, std::vector<int>> separable_blobs(int n_per_class, double gap, uint64_t seed) {
  Rng rng(seed);
  Matrix X(static_cast<size_t>(2 * n_per_class), 2);
  std::vector<int> y(static_cast<size_t>(2 * n_per_class));
  for (int i = 0; i < 2 * n_per_class; ++i) {
    const int label = i < n_per_class ? 0 : 1;
    const auto r = static_cast<size_t>(i);
    X.at(r, 0) = (label ? gap : -gap) + 0.5 * rng.next_normal();
    X.at(r, 1) = 0.5 * rng.next_normal();
    y[r] = label;
  }
  return {X, y};
}

}  // namespace

// ---- Logistic regression ----------------------------------------------------

TEST_CASE("logreg on symmetric 1-D data finds a near-zero intercept") {
  Matrix X(20, 1);
  std::vector<int> y(20);
  for (size_t i = 0; i < 20; ++i) {
    X.at(i, 0) = i < 10 ? -1.0 : 1.0;
    y[i] = i < 10 ? 0 : 1;
  }
  LogRegParams params;
  params.penalty = LogRegParams::Penalty::L2;
  params.C = 1.0;
  params.max_iterations = 500;
  const LogRegModel model = fit_logreg(X, y, params, ClassWeights{});
  CHECK(std::fabs(model.intercept) < 1e-3);
  CHECK(model.weights[0] > 0.0);
}

TEST_CASE("strong l1 zeroes a pure-noise coefficient exactly") {
  Rng rng(31);
  Matrix X(200, 2);
  std::vector<int> y(200);
  for (size_t i = 0; i < 200; ++i) {
    y[i] = i % 2 == 0 ? 1 : 0;
    X.at(i, 0) = (y[i] ? 1.0 : -1.0) + 0.3 * rng.next_normal();  // informative
    X.at(i, 1) = rng.next_normal();                              // noise
  }
  LogRegParams params;
  params.penalty = LogRegParams::Penalty::L1;
  params.C = 0.01;
  params.max_iterations = 500;
  const LogRegModel model = fit_logreg(X, y, params, ClassWeights{});
  CHECK(model.weights[1] == 0.0);
}

TEST_CASE("unpenalized logreg on separable data hits the iteration cap at accuracy 1") {
  auto [X, y] = separable_blobs(25, 4.0, 5);
  LogRegParams params;
  params.penalty = LogRegParams::Penalty::None;
  // The unpenalized optimum sits at infinity; a binding cap must leave the
  // converged flag down while the data is already fully separated.
  params.max_iterations = 20;
  const LogRegModel model = fit_logreg(X, y, params, ClassWeights{});
  CHECK_FALSE(model.converged);
  CHECK(model.iterations == 20);
  CHECK(train_accuracy(model, X, y) == doctest::Approx(1.0));
}

TEST_CASE("l2 solution approaches the unpenalized one as C grows") {
  Rng rng(17);
  Matrix X(120, 3);
  std::vector<int> y(120);
  for (size_t i = 0; i < 120; ++i) {
    y[i] = rng.next_double() < 0.5 ? 1 : 0;
    for (size_t c = 0; c < 3; ++c) {
      X.at(i, c) = rng.next_normal() + (c == 0 ? 0.8 * (y[i] ? 1 : -1) : 0.0);
    }
  }
  LogRegParams base;
  base.penalty = LogRegParams::Penalty::None;
  base.max_iterations = 2000;
  const LogRegModel free_fit = fit_logreg(X, y, base, ClassWeights{});

  double last_dist = 1e18;
  for (double C : {0.01, 1.0, 100.0}) {
    LogRegParams params;
    params.penalty = LogRegParams::Penalty::L2;
    params.C = C;
    params.max_iterations = 2000;
    const LogRegModel model = fit_logreg(X, y, params, ClassWeights{});
    double dist = (model.intercept - free_fit.intercept) * (model.intercept - free_fit.intercept);
    for (size_t c = 0; c < 3; ++c) {
      dist += (model.weights[c] - free_fit.weights[c]) * (model.weights[c] - free_fit.weights[c]);
    }
    CHECK(dist < last_dist);
    last_dist = dist;
  }
}

TEST_CASE("newton and proximal agree on an l2 problem") {
  Rng rng(23);
  Matrix X(80, 2);
  std::vector<int> y(80);
  for (size_t i = 0; i < 80; ++i) {
    y[i] = rng.next_double() < 0.4 ? 1 : 0;
    X.at(i, 0) = rng.next_normal() + (y[i] ? 1.0 : 0.0);
    X.at(i, 1) = rng.next_normal();
  }
  LogRegParams prox;
  prox.penalty = LogRegParams::Penalty::L2;
  prox.C = 1.0;
  prox.max_iterations = 5000;
  prox.solver = LogRegParams::Solver::Proximal;
  LogRegParams newton = prox;
  newton.solver = LogRegParams::Solver::Newton;
  newton.max_iterations = 100;

  const LogRegModel a = fit_logreg(X, y, prox, ClassWeights{});
  const LogRegModel b = fit_logreg(X, y, newton, ClassWeights{});
  CHECK(a.converged);
  CHECK(b.converged);
  for (size_t c = 0; c < 2; ++c) CHECK(a.weights[c] == doctest::Approx(b.weights[c]).epsilon(1e-3));
  CHECK(a.intercept == doctest::Approx(b.intercept).epsilon(1e-3));
}

TEST_CASE("newton path rejects l1") {
  Matrix X(4, 1);
  LogRegParams params;
  params.penalty = LogRegParams::Penalty::L1;
  params.solver = LogRegParams::Solver::Newton;
  CHECK_THROWS_AS(fit_logreg(X, {0, 1, 0, 1}, params, ClassWeights{}), Error);
}

TEST_CASE("degenerate all-zero model scores 0 and predicts malignant") {
  LogRegModel model;
  model.weights = {0.0, 0.0};
  model.intercept = 0.0;
  Matrix X(1, 2);
  X.at(0, 0) = 3.0;
  X.at(0, 1) = -2.0;
  CHECK(model.decision_scores(X)[0] == 0.0);
  CHECK(model.predict(X)[0] == 1);  // score >= 0 convention
}

TEST_CASE("non-finite input is rejected") {
  Matrix X(2, 1);
  X.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_logreg(X, {0, 1}, LogRegParams{}, ClassWeights{}), Error);
}

// ---- SVM ---------------------------------------------------------------------

TEST_CASE("linear svm separates blobs with positive margin") {
  auto [X, y] = separable_blobs(30, 3.0, 7);
  SvmParams params;
  params.kernel = SvmParams::Kernel::Linear;
  params.C = 1.0;
  const SvmModel model = fit_svm(X, y, params, ClassWeights{});
  CHECK(train_accuracy(model, X, y) == doctest::Approx(1.0));

  // Support vectors sit on or outside the margin, strictly off the boundary.
  const std::vector<double> sv_scores = model.decision_scores(model.support_vectors);
  for (double s : sv_scores) CHECK(std::fabs(s) > 0.0);
  CHECK(model.support_vectors.rows >= 2);
}

TEST_CASE("rbf svm solves xor") {
  Matrix X(4, 2);
  X.at(0, 0) = 0;
  X.at(0, 1) = 0;
  X.at(1, 0) = 1;
  X.at(1, 1) = 1;
  X.at(2, 0) = 0;
  X.at(2, 1) = 1;
  X.at(3, 0) = 1;
  X.at(3, 1) = 0;
  const std::vector<int> y{0, 0, 1, 1};
  SvmParams params;
  params.kernel = SvmParams::Kernel::Rbf;
  params.gamma = {SvmParams::Gamma::Kind::Value, 1.0};
  params.C = 1000.0;
  const SvmModel model = fit_svm(X, y, params, ClassWeights{});
  CHECK(train_accuracy(model, X, y) == doctest::Approx(1.0));
}

TEST_CASE("class weighting raises minority recall") {
  Rng rng(41);
  const int n_major = 300, n_minor = 12;
  Matrix X(n_major + n_minor, 2);
  std::vector<int> y;
  for (int i = 0; i < n_major + n_minor; ++i) {
    const int label = i < n_major ? 0 : 1;
    const auto r = static_cast<size_t>(i);
    // Overlapping classes so the unweighted fit sacrifices the minority.
    X.at(r, 0) = (label ? 1.2 : 0.0) + rng.next_normal();
    X.at(r, 1) = rng.next_normal();
    y.push_back(label);
  }
  SvmParams params;
  params.kernel = SvmParams::Kernel::Linear;
  params.C = 1.0;

  const SvmModel unweighted = fit_svm(X, y, params, ClassWeights{});
  const ClassWeights balanced = compute_class_weights(y);
  const SvmModel weighted = fit_svm(X, y, params, balanced);

  auto recall_minority = [&](const SvmModel& m) {
    const std::vector<int> pred = m.predict(X);
    double tp = 0.0, fn = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 1) (pred[i] == 1 ? tp : fn) += 1.0;
    }
    return tp / (tp + fn);
  };
  CHECK(recall_minority(weighted) > recall_minority(unweighted));
}

TEST_CASE("svm satisfies kkt conditions on random separable sets") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto [X, y] = separable_blobs(15 + static_cast<int>(seed % 10), 2.5, 100 + seed);
    SvmParams params;
    params.kernel = seed % 2 ? SvmParams::Kernel::Rbf : SvmParams::Kernel::Linear;
    params.gamma = {SvmParams::Gamma::Kind::Scale, 0.0};
    params.C = 1.0 + static_cast<double>(seed % 3);
    const ClassWeights w = compute_class_weights(y);
    const SvmModel model = fit_svm(X, y, params, w);
    CHECK(model.converged);

    const SvmKktReport report = svm_kkt_report(model, X, y, w);
    CHECK(report.max_violation < 1e-3);
    CHECK(report.equality_residual < 1e-6);
    CHECK(report.box_respected);
  }
}

TEST_CASE("sigmoid kernel terminates") {
  auto [X, y] = separable_blobs(20, 2.0, 3);
  SvmParams params;
  params.kernel = SvmParams::Kernel::Sigmoid;
  params.gamma = {SvmParams::Gamma::Kind::Value, 0.5};
  params.C = 10.0;
  const SvmModel model = fit_svm(X, y, params, ClassWeights{});
  CHECK(model.iterations >= 0);  // reaching here is the point
  CHECK(model.support_vectors.rows > 0);
}

TEST_CASE("svm gamma scale/auto resolution") {
  auto [X, y] = separable_blobs(10, 2.0, 9);
  SvmParams params;
  params.kernel = SvmParams::Kernel::Rbf;
  params.gamma = {SvmParams::Gamma::Kind::Auto, 0.0};
  const SvmModel auto_model = fit_svm(X, y, params, ClassWeights{});
  CHECK(auto_model.gamma_value == doctest::Approx(0.5));  // 1 / n_features

  params.gamma = {SvmParams::Gamma::Kind::Scale, 0.0};
  const SvmModel scale_model = fit_svm(X, y, params, ClassWeights{});
  double mean = 0.0;
  for (double v : X.data) mean += v;
  mean /= static_cast<double>(X.data.size());
  double var = 0.0;
  for (double v : X.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(X.data.size());
  CHECK(scale_model.gamma_value == doctest::Approx(1.0 / (2.0 * var)));
}

// ---- MLP ----------------------------------------------------------------------

TEST_CASE("mlp analytic gradients match central finite differences") {
  for (const auto activation : {MlpParams::Activation::Tanh, MlpParams::Activation::Relu}) {
    MlpNetwork net;
    net.sizes = {2, 3, 1};
    net.activation = activation;
    net.init_glorot(1234);

    Rng rng(55);
    Matrix X(8, 2);
    std::vector<int> y(8);
    for (size_t i = 0; i < 8; ++i) {
      X.at(i, 0) = rng.next_normal();
      X.at(i, 1) = rng.next_normal();
      y[i] = rng.next_double() < 0.5 ? 1 : 0;
    }

    const std::vector<double> analytic = net.loss_gradient(X, y);
    const double eps = 1e-5;
    double max_rel = 0.0;
    for (size_t p = 0; p < net.params.size(); ++p) {
      const double saved = net.params[p];
      net.params[p] = saved + eps;
      const double up = net.loss(X, y);
      net.params[p] = saved - eps;
      const double down = net.loss(X, y);
      net.params[p] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double rel = std::fabs(analytic[p] - numeric) /
                         std::max(1e-8, std::fabs(analytic[p]) + std::fabs(numeric));
      max_rel = std::max(max_rel, rel);
    }
    CAPTURE(static_cast<int>(activation));
    CHECK(max_rel < 1e-4);
  }
}

TEST_CASE("zero hidden weights leave units symmetric; glorot init breaks the tie") {
  MlpNetwork net;
  net.sizes = {2, 4, 1};
  net.activation = MlpParams::Activation::Tanh;
  net.params.assign(net.param_count(), 0.0);

  Matrix X(4, 2);
  X.at(0, 0) = 1;
  X.at(1, 0) = -1;
  X.at(2, 1) = 1;
  X.at(3, 1) = -1;
  const std::vector<int> y{1, 0, 1, 0};

  // One gradient step from the all-zero point: every hidden unit receives
  // the same update, so activations stay identical across units.
  const std::vector<double> g = net.loss_gradient(X, y);
  for (size_t p = 0; p < net.params.size(); ++p) net.params[p] -= 0.1 * g[p];
  // Hidden weights: layout is [w(2x4), b(4), w(4x1), b(1)].
  for (int unit = 1; unit < 4; ++unit) {
    for (int in = 0; in < 2; ++in) {
      CHECK(net.params[static_cast<size_t>(in * 4 + unit)] ==
            doctest::Approx(net.params[static_cast<size_t>(in * 4)]));
    }
  }

  net.init_glorot(7);
  bool any_different = false;
  for (int unit = 1; unit < 4 && !any_different; ++unit) {
    if (net.params[static_cast<size_t>(unit)] != net.params[0]) any_different = true;
  }
  CHECK(any_different);
}

TEST_CASE("mlp fits two moons") {
  auto [X, y] = two_moons(200, 0.1, 77);
  MlpParams params;
  params.hidden = {50};
  params.activation = MlpParams::Activation::Relu;
  params.solver = MlpParams::Solver::Adam;
  const MlpModel model = fit_mlp(X, y, params, 3);
  CHECK(train_accuracy(model, X, y) >= 0.95);
}

TEST_CASE("mlp training is deterministic in the seed") {
  auto [X, y] = two_moons(80, 0.15, 11);
  MlpParams params;
  params.hidden = {16};
  params.max_epochs = 30;
  const MlpModel a = fit_mlp(X, y, params, 42);
  const MlpModel b = fit_mlp(X, y, params, 42);
  CHECK(a.net.params == b.net.params);
  const MlpModel c = fit_mlp(X, y, params, 43);
  CHECK(a.net.params != c.net.params);
}

TEST_CASE("mlp sgd schedules run") {
  auto [X, y] = two_moons(100, 0.1, 19);
  for (const auto schedule : {MlpParams::LrSchedule::Constant, MlpParams::LrSchedule::InvScaling,
                              MlpParams::LrSchedule::Adaptive}) {
    MlpParams params;
    params.hidden = {20};
    params.solver = MlpParams::Solver::Sgd;
    params.lr_schedule = schedule;
    params.learning_rate = 0.05;
    params.max_epochs = 60;
    const MlpModel model = fit_mlp(X, y, params, 5);
    CHECK(train_accuracy(model, X, y) > 0.8);
  }
}

TEST_CASE("mlp divergence raises a numeric error naming the epoch") {
  auto [X, y] = two_moons(60, 0.1, 23);
  for (auto& v : X.data) v *= 1e6;  // keep gradients enormous
  MlpParams params;
  params.hidden = {8};
  params.solver = MlpParams::Solver::Sgd;
  params.learning_rate = 1e12;
  try {
    fit_mlp(X, y, params, 1);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Numeric);
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

// ---- Shared contract -----------------------------------------------------------

TEST_CASE("labels equal the sign of scores for every model") {
  auto [X, y] = two_moons(60, 0.2, 31);
  std::vector<std::unique_ptr<Model>> models;
  {
    SvmParams sp;
    sp.kernel = SvmParams::Kernel::Rbf;
    sp.gamma = {SvmParams::Gamma::Kind::Scale, 0.0};
    models.push_back(std::make_unique<SvmModel>(fit_svm(X, y, sp, ClassWeights{})));
    LogRegParams lp;
    models.push_back(std::make_unique<LogRegModel>(fit_logreg(X, y, lp, ClassWeights{})));
    MlpParams mp;
    mp.hidden = {10};
    mp.max_epochs = 20;
    models.push_back(std::make_unique<MlpModel>(fit_mlp(X, y, mp, 2)));
  }
  for (const auto& model : models) {
    const std::vector<double> scores = model->decision_scores(X);
    const std::vector<int> labels = model->predict(X);
    for (size_t i = 0; i < labels.size(); ++i) {
      CHECK(labels[i] == (scores[i] >= 0.0 ? 1 : 0));
    }
    // Duplicated row scores identically.
    Matrix two(2, X.cols);
    std::copy(X.row(0), X.row(0) + X.cols, two.row(0));
    std::copy(X.row(0), X.row(0) + X.cols, two.row(1));
    const std::vector<double> dup = model->decision_scores(two);
    CHECK(dup[0] == dup[1]);
    // Feature-count mismatch is an error.
    CHECK_THROWS_AS(model->decision_scores(Matrix(1, X.cols + 1)), Error);
  }
}
