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

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "model.hpp"

namespace voicebench {

namespace {

constexpr double kKktTolerance = 1e-3;
constexpr double kTau = 1e-12;
constexpr int64_t kMaxIterations = 200000;

double dot(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double kernel_eval(const SvmParams& params, double gamma, const double* a, const double* b,
                   size_t n) {
  switch (params.kernel) {
    case SvmParams::Kernel::Linear:
      return dot(a, b, n);
    case SvmParams::Kernel::Poly: {
      // coef0 pinned to 0: k(x,z) = (gamma <x,z>)^degree
      return std::pow(gamma * dot(a, b, n), params.degree);
    }
    case SvmParams::Kernel::Rbf: {
      double d2 = 0.0;
      for (size_t i = 0; i < n; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
      return std::exp(-gamma * d2);
    }
    case SvmParams::Kernel::Sigmoid:
      return std::tanh(gamma * dot(a, b, n));
  }
  return 0.0;
}

double resolve_gamma(const SvmParams::Gamma& gamma, const Matrix& X) {
  switch (gamma.kind) {
    case SvmParams::Gamma::Kind::Value:
      return gamma.value;
    case SvmParams::Gamma::Kind::Auto:
      return 1.0 / static_cast<double>(X.cols);
    case SvmParams::Gamma::Kind::Scale: {
      double mean = 0.0;
      for (double v : X.data) mean += v;
      mean /= static_cast<double>(X.data.size());
      double var = 0.0;
      for (double v : X.data) var += (v - mean) * (v - mean);
      var /= static_cast<double>(X.data.size());
      if (var <= 0.0) var = 1.0;
      return 1.0 / (static_cast<double>(X.cols) * var);
    }
  }
  return 1.0;
}

}  // namespace

std::vector<double> SvmModel::decision_scores(const Matrix& X) const {
  check_feature_count(*this, X);
  std::vector<double> scores(X.rows, bias);
  for (size_t i = 0; i < X.rows; ++i) {
    const double* x = X.row(i);
    double s = bias;
    for (size_t v = 0; v < support_vectors.rows; ++v) {
      s += dual_coef[v] * kernel_eval(params, gamma_value, support_vectors.row(v), x, X.cols);
    }
    scores[i] = s;
  }
  return scores;
}

SvmModel fit_svm(const Matrix& X, const std::vector<int>& y, const SvmParams& params,
                 const ClassWeights& weights) {
  if (X.rows != y.size() || X.rows == 0) fail(ErrorCode::InvalidArgument, "fit_svm: bad shapes");
  check_finite(X, "fit_svm");
  if (params.C <= 0.0) fail(ErrorCode::InvalidArgument, "fit_svm: C must be > 0");

  const size_t n = X.rows;
  const double gamma = resolve_gamma(params.gamma, X);

  std::vector<double> sy(n);  // labels in {-1, +1}
  std::vector<double> box(n);
  for (size_t i = 0; i < n; ++i) {
    sy[i] = y[i] ? 1.0 : -1.0;
    box[i] = params.C * weights.of(y[i]);
  }

  // Full kernel cache for the training sizes this toolkit targets.
  const bool cache_full = n <= 3000;
  Matrix K;
  if (cache_full) {
    K = Matrix(n, n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i; j < n; ++j) {
        const double v = kernel_eval(params, gamma, X.row(i), X.row(j), X.cols);
        K.at(i, j) = v;
        K.at(j, i) = v;
      }
    }
  }
  std::vector<double> row_i(n), row_j(n);
  auto kernel_row = [&](size_t r, std::vector<double>& dst) -> const double* {
    if (cache_full) return K.row(r);
    for (size_t j = 0; j < n; ++j) dst[j] = kernel_eval(params, gamma, X.row(r), X.row(j), X.cols);
    return dst.data();
  };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual objective

  SvmModel model;
  model.params = params;
  model.gamma_value = gamma;
  model.feature_count = X.cols;
  model.converged = false;

  int64_t iter = 0;
  double m_final = 0.0, M_final = 0.0;
  for (; iter < kMaxIterations; ++iter) {
    // Maximal violating pair.
    int i = -1, j = -1;
    double m_val = -std::numeric_limits<double>::infinity();
    double M_val = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      const bool in_up = (sy[t] > 0 && alpha[t] < box[t]) || (sy[t] < 0 && alpha[t] > 0);
      const bool in_down = (sy[t] > 0 && alpha[t] > 0) || (sy[t] < 0 && alpha[t] < box[t]);
      const double v = -sy[t] * grad[t];
      if (in_up && v > m_val) {
        m_val = v;
        i = static_cast<int>(t);
      }
      if (in_down && v < M_val) {
        M_val = v;
        j = static_cast<int>(t);
      }
    }
    m_final = m_val;
    M_final = M_val;
    if (i < 0 || j < 0 || m_val - M_val < kKktTolerance) {
      model.converged = i >= 0 && j >= 0;
      break;
    }

    const auto ii = static_cast<size_t>(i);
    const auto jj = static_cast<size_t>(j);
    const double* Ki = kernel_row(ii, row_i);
    const double* Kj = kernel_row(jj, row_j);

    // Two-variable subproblem along the equality constraint.
    double eta = Ki[ii] + Kj[jj] - 2.0 * Ki[jj];
    if (eta <= 0.0) eta = kTau;  // sigmoid kernels may be indefinite
    const double delta = (m_val - M_val) / eta;

    const double old_ai = alpha[ii];
    const double old_aj = alpha[jj];
    double ai = old_ai + sy[ii] * delta;
    // Clip to the box honoring the equality constraint.
    const double sum = sy[ii] * old_ai + sy[jj] * old_aj;
    ai = std::clamp(ai, 0.0, box[ii]);
    double aj = sy[jj] * (sum - sy[ii] * ai);
    if (aj < 0.0) {
      aj = 0.0;
      ai = sy[ii] * (sum - sy[jj] * aj);
      ai = std::clamp(ai, 0.0, box[ii]);
    } else if (aj > box[jj]) {
      aj = box[jj];
      ai = sy[ii] * (sum - sy[jj] * aj);
      ai = std::clamp(ai, 0.0, box[ii]);
    }

    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    if (std::fabs(dai) < 1e-16 && std::fabs(daj) < 1e-16) {
      model.converged = true;
      break;
    }
    for (size_t t = 0; t < n; ++t) {
      grad[t] += sy[t] * (sy[ii] * dai * Ki[t] + sy[jj] * daj * Kj[t]);
    }
    alpha[ii] = ai;
    alpha[jj] = aj;
  }
  model.iterations = static_cast<int>(iter);

  // At optimality b lies between max_{I_up} -yG and min_{I_down} -yG.
  model.bias = (m_final + M_final) / 2.0;

  for (size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      model.dual_coef.push_back(alpha[t] * sy[t]);
    }
  }
  model.support_vectors = Matrix(model.dual_coef.size(), X.cols);
  size_t sv = 0;
  for (size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      std::copy(X.row(t), X.row(t) + X.cols, model.support_vectors.row(sv));
      ++sv;
    }
  }
  return model;
}

SvmKktReport svm_kkt_report(const SvmModel& model, const Matrix& X, const std::vector<int>& y,
                            const ClassWeights& weights) {
  const size_t n = X.rows;
  // Recover alpha for the training rows that became support vectors.
  std::vector<double> alpha(n, 0.0);
  size_t sv = 0;
  for (size_t t = 0; t < n && sv < model.support_vectors.rows; ++t) {
    if (std::equal(X.row(t), X.row(t) + X.cols, model.support_vectors.row(sv))) {
      alpha[t] = std::fabs(model.dual_coef[sv]);
      ++sv;
    }
  }

  SvmKktReport report;
  double equality = 0.0;
  std::vector<double> grad(n, -1.0);
  for (size_t t = 0; t < n; ++t) {
    const double st = y[t] ? 1.0 : -1.0;
    equality += alpha[t] * st;
    const double ct = model.params.C * weights.of(y[t]);
    if (alpha[t] < -1e-12 || alpha[t] > ct + 1e-9) report.box_respected = false;
    double g = -1.0;
    for (size_t u = 0; u < n; ++u) {
      if (alpha[u] == 0.0) continue;
      const double su = y[u] ? 1.0 : -1.0;
      g += st * su * alpha[u] *
           kernel_eval(model.params, model.gamma_value, X.row(t), X.row(u), X.cols);
    }
    grad[t] = g;
  }
  report.equality_residual = std::fabs(equality);

  double m_val = -std::numeric_limits<double>::infinity();
  double M_val = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < n; ++t) {
    const double st = y[t] ? 1.0 : -1.0;
    const double ct = model.params.C * weights.of(y[t]);
    const bool in_up = (st > 0 && alpha[t] < ct) || (st < 0 && alpha[t] > 0);
    const bool in_down = (st > 0 && alpha[t] > 0) || (st < 0 && alpha[t] < ct);
    const double v = -st * grad[t];
    if (in_up) m_val = std::max(m_val, v);
    if (in_down) M_val = std::min(M_val, v);
  }
  report.max_violation = m_val - M_val;
  return report;
}

}  // namespace voicebench
