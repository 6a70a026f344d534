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

#include "model.hpp"

#include <cmath>

#include "error.hpp"

namespace voicebench {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Svm: return "svm";
    case Algorithm::Mlp: return "mlp";
    case Algorithm::LogReg: return "logreg";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  const std::string n = lowercase(name);
  if (n == "svm") return Algorithm::Svm;
  if (n == "mlp") return Algorithm::Mlp;
  if (n == "logreg" || n == "logistic_regression" || n == "logisticregression") {
    return Algorithm::LogReg;
  }
  fail(ErrorCode::Config, "unknown algorithm '" + name + "' (expected svm, mlp or logreg)");
}

std::vector<int> Model::predict(const Matrix& X) const {
  const std::vector<double> scores = decision_scores(X);
  std::vector<int> labels(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] >= 0.0 ? 1 : 0;
  return labels;
}

void check_feature_count(const Model& model, const Matrix& X) {
  if (X.cols != model.n_features()) {
    fail(ErrorCode::InvalidArgument,
         "feature count mismatch: model expects " + std::to_string(model.n_features()) +
             ", input has " + std::to_string(X.cols));
  }
}

void check_finite(const Matrix& X, const char* who) {
  for (double v : X.data) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, std::string(who) + ": non-finite input");
  }
}

}  // namespace voicebench
