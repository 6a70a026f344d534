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

#include "error.hpp"
#include "model.hpp"

namespace voicebench {

namespace {

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) {
  if (m > 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct Objective {
  const Matrix& X;
  const std::vector<int>& y;
  std::vector<double> sample_weight;
  double l1 = 0.0;  // multiplier of |w|_1
  double l2 = 0.0;  // multiplier of 0.5 |w|_2^2 (folded into the smooth part)

  // Smooth part: weighted logistic loss + ridge term.
  double smooth(const std::vector<double>& w, double b) const {
    double loss = 0.0;
    for (size_t i = 0; i < X.rows; ++i) {
      double z = b;
      const double* row = X.row(i);
      for (size_t c = 0; c < X.cols; ++c) z += row[c] * w[c];
      const double s = y[i] ? 1.0 : -1.0;
      loss += sample_weight[i] * log1p_exp_neg(s * z);
    }
    double ridge = 0.0;
    for (double v : w) ridge += v * v;
    return loss + 0.5 * l2 * ridge;
  }

  void smooth_gradient(const std::vector<double>& w, double b, std::vector<double>& gw,
                       double& gb) const {
    gw.assign(w.size(), 0.0);
    gb = 0.0;
    for (size_t i = 0; i < X.rows; ++i) {
      double z = b;
      const double* row = X.row(i);
      for (size_t c = 0; c < X.cols; ++c) z += row[c] * w[c];
      const double s = y[i] ? 1.0 : -1.0;
      const double coef = -sample_weight[i] * s * sigmoid(-s * z);
      for (size_t c = 0; c < X.cols; ++c) gw[c] += coef * row[c];
      gb += coef;
    }
    for (size_t c = 0; c < w.size(); ++c) gw[c] += l2 * w[c];
  }

  double total(const std::vector<double>& w, double b) const {
    double l1_term = 0.0;
    for (double v : w) l1_term += std::fabs(v);
    return smooth(w, b) + l1 * l1_term;
  }
};

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Proximal gradient with backtracking; handles every penalty.
void solve_proximal(const Objective& obj, std::vector<double>& w, double& b, int max_iterations,
                    int& iterations, bool& converged) {
  double step = 1.0;
  converged = false;
  for (iterations = 0; iterations < max_iterations; ++iterations) {
    std::vector<double> gw;
    double gb;
    obj.smooth_gradient(w, b, gw, gb);
    const double f0 = obj.smooth(w, b);

    std::vector<double> w_next(w.size());
    double b_next = 0.0;
    step = std::min(step * 2.0, 1e4);  // optimistic restart, then backtrack
    while (true) {
      for (size_t c = 0; c < w.size(); ++c) {
        w_next[c] = soft_threshold(w[c] - step * gw[c], step * obj.l1);
      }
      b_next = b - step * gb;

      // Sufficient-decrease condition for the smooth part.
      double quad = 0.0, lin = 0.0;
      for (size_t c = 0; c < w.size(); ++c) {
        const double d = w_next[c] - w[c];
        lin += gw[c] * d;
        quad += d * d;
      }
      const double db = b_next - b;
      lin += gb * db;
      quad += db * db;
      if (obj.smooth(w_next, b_next) <= f0 + lin + quad / (2.0 * step) + 1e-12) break;
      step *= 0.5;
      if (step < 1e-12) break;
    }

    // Proximal-gradient mapping norm as the stationarity measure.
    double move = 0.0;
    for (size_t c = 0; c < w.size(); ++c) {
      const double d = (w[c] - w_next[c]) / step;
      move += d * d;
    }
    const double db = (b - b_next) / step;
    move += db * db;

    w.swap(w_next);
    b = b_next;
    if (std::sqrt(move) < 1e-6) {
      converged = true;
      ++iterations;
      break;
    }
  }
}

// Newton/IRLS path for the smooth penalties (l2, none).
void solve_newton(const Objective& obj, std::vector<double>& w, double& b, int max_iterations,
                  int& iterations, bool& converged) {
  const size_t d = w.size();
  const size_t n = d + 1;  // + intercept
  converged = false;
  std::vector<double> H(n * n), g(n), delta(n);

  for (iterations = 0; iterations < max_iterations; ++iterations) {
    std::vector<double> gw;
    double gb;
    obj.smooth_gradient(w, b, gw, gb);
    double gnorm = std::fabs(gb);
    for (double v : gw) gnorm = std::max(gnorm, std::fabs(v));
    if (gnorm < 1e-6) {
      converged = true;
      break;
    }

    std::fill(H.begin(), H.end(), 0.0);
    for (size_t i = 0; i < obj.X.rows; ++i) {
      double z = b;
      const double* row = obj.X.row(i);
      for (size_t c = 0; c < d; ++c) z += row[c] * w[c];
      const double p = sigmoid(z);
      const double wi = obj.sample_weight[i] * p * (1.0 - p);
      for (size_t a = 0; a < d; ++a) {
        for (size_t c = a; c < d; ++c) H[a * n + c] += wi * row[a] * row[c];
        H[a * n + d] += wi * row[a];
      }
      H[d * n + d] += wi;
    }
    for (size_t a = 0; a < d; ++a) H[a * n + a] += obj.l2 + 1e-10;
    H[d * n + d] += 1e-10;
    for (size_t a = 0; a < n; ++a) {
      for (size_t c = 0; c < a; ++c) H[a * n + c] = H[c * n + a];
    }
    for (size_t c = 0; c < d; ++c) g[c] = gw[c];
    g[d] = gb;

    // Cholesky solve H delta = -g.
    std::vector<double> L(n * n, 0.0);
    bool ok = true;
    for (size_t i = 0; i < n && ok; ++i) {
      for (size_t j = 0; j <= i; ++j) {
        double s = H[i * n + j];
        for (size_t k2 = 0; k2 < j; ++k2) s -= L[i * n + k2] * L[j * n + k2];
        if (i == j) {
          if (s <= 0.0) {
            ok = false;
            break;
          }
          L[i * n + i] = std::sqrt(s);
        } else {
          L[i * n + j] = s / L[j * n + j];
        }
      }
    }
    if (!ok) break;  // fall out; caller sees converged = false
    for (size_t i = 0; i < n; ++i) {
      double s = -g[i];
      for (size_t j = 0; j < i; ++j) s -= L[i * n + j] * delta[j];
      delta[i] = s / L[i * n + i];
    }
    for (size_t i = n; i-- > 0;) {
      double s = delta[i];
      for (size_t j = i + 1; j < n; ++j) s -= L[j * n + i] * delta[j];
      delta[i] = s / L[i * n + i];
    }

    // Halving line search on the objective.
    const double f0 = obj.smooth(w, b);
    double t = 1.0;
    std::vector<double> w_try(d);
    while (t > 1e-8) {
      for (size_t c = 0; c < d; ++c) w_try[c] = w[c] + t * delta[c];
      const double b_try = b + t * delta[d];
      if (obj.smooth(w_try, b_try) <= f0) {
        w = w_try;
        b = b_try;
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-8) break;
  }
}

}  // namespace

std::vector<double> LogRegModel::decision_scores(const Matrix& X) const {
  check_feature_count(*this, X);
  std::vector<double> scores(X.rows);
  for (size_t i = 0; i < X.rows; ++i) {
    double z = intercept;
    const double* row = X.row(i);
    for (size_t c = 0; c < X.cols; ++c) z += row[c] * weights[c];
    scores[i] = z;
  }
  return scores;
}

LogRegModel fit_logreg(const Matrix& X, const std::vector<int>& y, const LogRegParams& params,
                       const ClassWeights& weights) {
  if (X.rows != y.size() || X.rows == 0) fail(ErrorCode::InvalidArgument, "fit_logreg: bad shapes");
  check_finite(X, "fit_logreg");
  if (params.C <= 0.0) fail(ErrorCode::InvalidArgument, "fit_logreg: C must be > 0");
  if (params.l1_ratio < 0.0 || params.l1_ratio > 1.0) {
    fail(ErrorCode::InvalidArgument, "fit_logreg: l1_ratio must be in [0, 1]");
  }

  const double lambda = 1.0 / params.C;
  Objective obj{X, y, {}, 0.0, 0.0};
  obj.sample_weight.resize(X.rows);
  for (size_t i = 0; i < X.rows; ++i) obj.sample_weight[i] = weights.of(y[i]);
  switch (params.penalty) {
    case LogRegParams::Penalty::L1: obj.l1 = lambda; break;
    case LogRegParams::Penalty::L2: obj.l2 = lambda; break;
    case LogRegParams::Penalty::ElasticNet:
      obj.l1 = lambda * params.l1_ratio;
      obj.l2 = lambda * (1.0 - params.l1_ratio);
      break;
    case LogRegParams::Penalty::None: break;
  }

  if (params.solver == LogRegParams::Solver::Newton && obj.l1 > 0.0) {
    fail(ErrorCode::InvalidArgument, "fit_logreg: the Newton path does not support l1/elasticnet");
  }

  LogRegModel model;
  model.params = params;
  model.weights.assign(X.cols, 0.0);
  model.intercept = 0.0;
  if (params.solver == LogRegParams::Solver::Newton) {
    solve_newton(obj, model.weights, model.intercept, params.max_iterations, model.iterations,
                 model.converged);
  } else {
    solve_proximal(obj, model.weights, model.intercept, params.max_iterations, model.iterations,
                   model.converged);
  }
  return model;
}

}  // namespace voicebench
