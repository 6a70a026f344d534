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

double act(double z, MlpParams::Activation a) {
  return a == MlpParams::Activation::Relu ? std::max(z, 0.0) : std::tanh(z);
}

double act_grad(double z, MlpParams::Activation a) {
  if (a == MlpParams::Activation::Relu) return z > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-m)): BCE of a logit against its {-1,+1} target margin.
double log1p_exp_neg(double m) {
  if (m > 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

// Layer l weights occupy [offset, offset + in*out), then out biases.
struct Layout {
  size_t weight_offset(const std::vector<int>& sizes, size_t layer) const {
    size_t off = 0;
    for (size_t l = 0; l < layer; ++l) {
      off += static_cast<size_t>(sizes[l]) * static_cast<size_t>(sizes[l + 1]) +
             static_cast<size_t>(sizes[l + 1]);
    }
    return off;
  }
};

struct Forward {
  std::vector<std::vector<double>> pre;   // pre-activations per layer
  std::vector<std::vector<double>> post;  // activations per layer (post[0] = input)
};

void forward_one(const MlpNetwork& net, const double* x, Forward& f) {
  const size_t n_layers = net.sizes.size() - 1;
  f.pre.resize(n_layers);
  f.post.resize(n_layers + 1);
  f.post[0].assign(x, x + net.sizes[0]);

  Layout layout;
  for (size_t l = 0; l < n_layers; ++l) {
    const auto in = static_cast<size_t>(net.sizes[l]);
    const auto out = static_cast<size_t>(net.sizes[l + 1]);
    const double* w = net.params.data() + layout.weight_offset(net.sizes, l);
    const double* bias = w + in * out;
    f.pre[l].assign(out, 0.0);
    for (size_t o = 0; o < out; ++o) {
      double z = bias[o];
      for (size_t i = 0; i < in; ++i) z += f.post[l][i] * w[i * out + o];
      f.pre[l][o] = z;
    }
    f.post[l + 1].resize(out);
    const bool last = l + 1 == n_layers;
    for (size_t o = 0; o < out; ++o) {
      f.post[l + 1][o] = last ? f.pre[l][o] : act(f.pre[l][o], net.activation);
    }
  }
}

}  // namespace

size_t MlpNetwork::param_count() const {
  size_t count = 0;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    count += static_cast<size_t>(sizes[l]) * static_cast<size_t>(sizes[l + 1]) +
             static_cast<size_t>(sizes[l + 1]);
  }
  return count;
}

void MlpNetwork::init_glorot(uint64_t seed) {
  params.assign(param_count(), 0.0);
  Rng rng(seed);
  Layout layout;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto in = static_cast<size_t>(sizes[l]);
    const auto out = static_cast<size_t>(sizes[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = params.data() + layout.weight_offset(sizes, l);
    for (size_t i = 0; i < in * out; ++i) w[i] = (2.0 * rng.next_double() - 1.0) * limit;
    // biases stay zero
  }
}

double MlpNetwork::loss(const Matrix& X, const std::vector<int>& y,
                        const std::vector<size_t>* idx) const {
  Forward f;
  double total = 0.0;
  const size_t n = idx ? idx->size() : X.rows;
  for (size_t k = 0; k < n; ++k) {
    const size_t r = idx ? (*idx)[k] : k;
    forward_one(*this, X.row(r), f);
    const double logit = f.post.back()[0];
    const double s = y[r] ? 1.0 : -1.0;
    total += log1p_exp_neg(s * logit);
  }
  return total / static_cast<double>(n);
}

std::vector<double> MlpNetwork::loss_gradient(const Matrix& X, const std::vector<int>& y,
                                              const std::vector<size_t>* idx) const {
  std::vector<double> grad(params.size(), 0.0);
  const size_t n_layers = sizes.size() - 1;
  Layout layout;
  Forward f;
  std::vector<std::vector<double>> delta(n_layers);

  const size_t n = idx ? idx->size() : X.rows;
  for (size_t k = 0; k < n; ++k) {
    const size_t r = idx ? (*idx)[k] : k;
    forward_one(*this, X.row(r), f);
    const double logit = f.post.back()[0];
    const double target = y[r] ? 1.0 : 0.0;
    // d(BCE)/d(logit) with sigmoid output
    delta[n_layers - 1] = {sigmoid(logit) - target};

    for (size_t l = n_layers - 1; l-- > 0;) {
      const auto out = static_cast<size_t>(sizes[l + 1]);
      const auto next_out = static_cast<size_t>(sizes[l + 2]);
      const double* w_next = params.data() + layout.weight_offset(sizes, l + 1);
      delta[l].assign(out, 0.0);
      for (size_t o = 0; o < out; ++o) {
        double s = 0.0;
        for (size_t q = 0; q < next_out; ++q) s += w_next[o * next_out + q] * delta[l + 1][q];
        delta[l][o] = s * act_grad(f.pre[l][o], activation);
      }
    }

    for (size_t l = 0; l < n_layers; ++l) {
      const auto in = static_cast<size_t>(sizes[l]);
      const auto out = static_cast<size_t>(sizes[l + 1]);
      double* gw = grad.data() + layout.weight_offset(sizes, l);
      double* gb = gw + in * out;
      for (size_t i = 0; i < in; ++i) {
        const double a = f.post[l][i];
        for (size_t o = 0; o < out; ++o) gw[i * out + o] += a * delta[l][o];
      }
      for (size_t o = 0; o < out; ++o) gb[o] += delta[l][o];
    }
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (double& g : grad) g *= scale;
  return grad;
}

std::vector<double> MlpNetwork::logits(const Matrix& X) const {
  Forward f;
  std::vector<double> out(X.rows);
  for (size_t r = 0; r < X.rows; ++r) {
    forward_one(*this, X.row(r), f);
    out[r] = f.post.back()[0];
  }
  return out;
}

std::vector<double> MlpModel::decision_scores(const Matrix& X) const {
  check_feature_count(*this, X);
  return net.logits(X);
}

MlpModel fit_mlp(const Matrix& X, const std::vector<int>& y, const MlpParams& params,
                 uint64_t seed) {
  if (X.rows != y.size() || X.rows == 0) fail(ErrorCode::InvalidArgument, "fit_mlp: bad shapes");
  check_finite(X, "fit_mlp");

  MlpModel model;
  model.params = params;
  model.seed = seed;
  model.net.activation = params.activation;
  model.net.sizes.push_back(static_cast<int>(X.cols));
  for (int h : params.hidden) model.net.sizes.push_back(h);
  model.net.sizes.push_back(1);
  model.net.init_glorot(seed);
  MlpNetwork& net = model.net;

  Rng rng(seed ^ 0x5eedu);

  // Stratified 10% validation split for early stopping when both classes
  // can afford it; otherwise patience runs on the training loss.
  std::vector<size_t> train_idx, val_idx;
  {
    std::vector<size_t> by_class[2];
    for (size_t i = 0; i < y.size(); ++i) by_class[y[i] ? 1 : 0].push_back(i);
    const bool can_split =
        by_class[0].size() >= 10 && by_class[1].size() >= 10 && params.validation_fraction > 0.0;
    if (can_split) {
      for (auto& idx : by_class) {
        rng.shuffle(idx);
        const auto n_val = std::max<size_t>(
            1, static_cast<size_t>(std::llround(params.validation_fraction *
                                                static_cast<double>(idx.size()))));
        for (size_t i = 0; i < idx.size(); ++i) {
          (i < n_val ? val_idx : train_idx).push_back(idx[i]);
        }
      }
      std::sort(train_idx.begin(), train_idx.end());
      std::sort(val_idx.begin(), val_idx.end());
    } else {
      for (size_t i = 0; i < y.size(); ++i) train_idx.push_back(i);
    }
  }
  const bool has_val = !val_idx.empty();

  const size_t n_params = net.params.size();
  std::vector<double> adam_m(n_params, 0.0), adam_v(n_params, 0.0), momentum(n_params, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  const size_t batch = std::min<size_t>(static_cast<size_t>(params.batch_size), train_idx.size());

  double lr = params.learning_rate;
  double best_monitor = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = net.params;
  int epochs_since_best = 0;
  int lr_stall = 0;
  double prev_train_loss = std::numeric_limits<double>::infinity();
  int64_t adam_t = 0;

  std::vector<size_t> order = train_idx;
  std::vector<size_t> batch_idx;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    if (params.solver == MlpParams::Solver::Sgd &&
        params.lr_schedule == MlpParams::LrSchedule::InvScaling) {
      lr = params.learning_rate / std::pow(static_cast<double>(epoch), 0.5);
    }

    rng.shuffle(order);
    for (size_t start = 0; start < order.size(); start += batch) {
      batch_idx.assign(order.begin() + static_cast<long>(start),
                       order.begin() + static_cast<long>(std::min(start + batch, order.size())));
      const std::vector<double> grad = net.loss_gradient(X, y, &batch_idx);
      if (params.solver == MlpParams::Solver::Adam) {
        ++adam_t;
        const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_t));
        const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_t));
        for (size_t p = 0; p < n_params; ++p) {
          adam_m[p] = kBeta1 * adam_m[p] + (1.0 - kBeta1) * grad[p];
          adam_v[p] = kBeta2 * adam_v[p] + (1.0 - kBeta2) * grad[p] * grad[p];
          net.params[p] -= lr * (adam_m[p] / bc1) / (std::sqrt(adam_v[p] / bc2) + kEps);
        }
      } else {
        for (size_t p = 0; p < n_params; ++p) {
          momentum[p] = 0.9 * momentum[p] - lr * grad[p];
          net.params[p] += momentum[p];
        }
      }
    }

    const double train_loss = net.loss(X, y, &train_idx);
    if (!std::isfinite(train_loss)) {
      fail(ErrorCode::Numeric, "fit_mlp: training diverged (non-finite loss at epoch " +
                                   std::to_string(epoch) + ")");
    }
    const double monitor = has_val ? net.loss(X, y, &val_idx) : train_loss;
    model.epochs_run = epoch;

    if (monitor < best_monitor - 1e-4) {
      best_monitor = monitor;
      best_params = net.params;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
      if (epochs_since_best >= params.patience) {
        model.early_stopped = true;
        break;
      }
    }

    if (params.solver == MlpParams::Solver::Sgd &&
        params.lr_schedule == MlpParams::LrSchedule::Adaptive) {
      if (train_loss > prev_train_loss - 1e-4) {
        if (++lr_stall >= 2) {
          lr /= 5.0;
          lr_stall = 0;
        }
      } else {
        lr_stall = 0;
      }
    }
    prev_train_loss = train_loss;
  }

  net.params = best_params;
  return model;
}

}  // namespace voicebench
