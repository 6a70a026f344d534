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

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "preprocess.hpp"
#include "util.hpp"

namespace voicebench {

enum class Algorithm { Svm, Mlp, LogReg };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct LogRegParams {
  enum class Penalty { L1, L2, ElasticNet, None };
  // Table-3 solver names map onto two optimizers: newton-cg/lbfgs -> Newton
  // (l2/none only), liblinear/saga -> proximal gradient (all penalties).
  enum class Solver { Proximal, Newton };

  Penalty penalty = Penalty::L2;
  double C = 1.0;
  int max_iterations = 100;
  double l1_ratio = 0.5;  // elasticnet only
  Solver solver = Solver::Proximal;
};

struct SvmParams {
  enum class Kernel { Linear, Poly, Rbf, Sigmoid };
  struct Gamma {
    enum class Kind { Scale, Auto, Value };
    Kind kind = Kind::Scale;
    double value = 0.0;
  };

  double C = 1.0;
  Gamma gamma;
  int degree = 3;      // polynomial only
  Kernel kernel = Kernel::Rbf;
};

struct MlpParams {
  enum class Activation { Relu, Tanh };
  enum class Solver { Adam, Sgd };
  enum class LrSchedule { Constant, InvScaling, Adaptive };

  std::vector<int> hidden{100};
  Activation activation = Activation::Relu;
  Solver solver = Solver::Adam;
  // The schedule only drives sgd; adam keeps its own per-parameter step.
  LrSchedule lr_schedule = LrSchedule::Constant;
  double learning_rate = 1e-2;
  int max_epochs = 200;
  int patience = 10;
  double validation_fraction = 0.1;
  int batch_size = 32;
};

// Common contract: decision scores are margins/logits, monotone in
// P(Malignant); labels apply the fixed threshold score >= 0.
class Model {
 public:
  virtual ~Model() = default;
  virtual Algorithm algorithm() const = 0;
  virtual size_t n_features() const = 0;
  virtual std::vector<double> decision_scores(const Matrix& X) const = 0;
  std::vector<int> predict(const Matrix& X) const;
};

void check_feature_count(const Model& model, const Matrix& X);
void check_finite(const Matrix& X, const char* who);

// ---- Logistic regression --------------------------------------------------

struct LogRegModel final : Model {
  std::vector<double> weights;
  double intercept = 0.0;
  LogRegParams params;
  int iterations = 0;
  bool converged = false;

  Algorithm algorithm() const override { return Algorithm::LogReg; }
  size_t n_features() const override { return weights.size(); }
  std::vector<double> decision_scores(const Matrix& X) const override;
};

LogRegModel fit_logreg(const Matrix& X, const std::vector<int>& y, const LogRegParams& params,
                       const ClassWeights& weights);

// ---- SVM (SMO dual solver) -------------------------------------------------

struct SvmModel final : Model {
  Matrix support_vectors;
  std::vector<double> dual_coef;  // alpha_i * y_i per support vector
  double bias = 0.0;
  SvmParams params;
  double gamma_value = 0.0;  // resolved from Gamma at fit time
  size_t feature_count = 0;
  int iterations = 0;
  bool converged = false;

  Algorithm algorithm() const override { return Algorithm::Svm; }
  size_t n_features() const override { return feature_count; }
  std::vector<double> decision_scores(const Matrix& X) const override;
};

SvmModel fit_svm(const Matrix& X, const std::vector<int>& y, const SvmParams& params,
                 const ClassWeights& weights);

// Dual feasibility diagnostics for tests and the acceptance gate.
struct SvmKktReport {
  double max_violation = 0.0;       // m(alpha) - M(alpha)
  double equality_residual = 0.0;   // |sum alpha_i y_i|
  bool box_respected = true;        // 0 <= alpha_i <= C_i
};
SvmKktReport svm_kkt_report(const SvmModel& model, const Matrix& X, const std::vector<int>& y,
                            const ClassWeights& weights);

// ---- MLP -------------------------------------------------------------------

// Flattened-parameter network; exposed so gradients can be checked against
// finite differences.
struct MlpNetwork {
  std::vector<int> sizes;  // [in, hidden..., 1]
  MlpParams::Activation activation = MlpParams::Activation::Relu;
  std::vector<double> params;

  size_t param_count() const;
  void init_glorot(uint64_t seed);
  // Mean binary cross-entropy over rows (optionally restricted to idx).
  double loss(const Matrix& X, const std::vector<int>& y, const std::vector<size_t>* idx = nullptr) const;
  std::vector<double> loss_gradient(const Matrix& X, const std::vector<int>& y,
                                    const std::vector<size_t>* idx = nullptr) const;
  std::vector<double> logits(const Matrix& X) const;
};

struct MlpModel final : Model {
  MlpNetwork net;
  MlpParams params;
  uint64_t seed = 0;
  int epochs_run = 0;
  bool early_stopped = false;

  Algorithm algorithm() const override { return Algorithm::Mlp; }
  size_t n_features() const override { return net.sizes.empty() ? 0 : static_cast<size_t>(net.sizes[0]); }
  std::vector<double> decision_scores(const Matrix& X) const override;
};

MlpModel fit_mlp(const Matrix& X, const std::vector<int>& y, const MlpParams& params, uint64_t seed);

}  // namespace voicebench
