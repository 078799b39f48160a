// Copyright 2026 The qsph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qsph/error.hpp"
#include "qsph/random.hpp"
#include "qsph/train.hpp"

namespace qsph::train {

void Dataset::push(std::span<const double> xi, std::span<const double> yi) {
  require(static_cast<int>(xi.size()) == in_width && static_cast<int>(yi.size()) == out_width, ErrorKind::Shape,
          "sample width does not match the dataset");
  x.insert(x.end(), xi.begin(), xi.end());
  y.insert(y.end(), yi.begin(), yi.end());
}

Split split_dataset(const Dataset& data, double train_frac, std::uint64_t seed) {
  require(train_frac > 0.0 && train_frac <= 1.0, ErrorKind::Configuration, "train fraction must lie in (0, 1]");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  shuffle(order, rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(data.size())));
  Split s;
  s.train.in_width = s.test.in_width = data.in_width;
  s.train.out_width = s.test.out_width = data.out_width;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? s.train : s.test).push(data.x_row(order[k]), data.y_row(order[k]));
  }
  return s;
}

OptimizerState OptimizerState::make(OptimizerKind kind, double lr, std::size_t n_params) {
  OptimizerState s;
  s.kind = kind;
  s.lr = lr;
  s.m.assign(n_params, 0.0);
  s.v.assign(n_params, 0.0);
  return s;
}

void optimizer_step(OptimizerState& st, std::vector<double>& params, std::span<const double> grads) {
  require(grads.size() == params.size(), ErrorKind::Shape, "gradient and parameter counts differ");
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!std::isfinite(grads[k])) {
      throw Error(ErrorKind::TrainingDivergence,
                  "non-finite gradient at parameter " + std::to_string(k) + " (step " + std::to_string(st.step + 1) + ")");
    }
  }
  ++st.step;
  if (st.kind == OptimizerKind::SGD) {
    for (std::size_t k = 0; k < params.size(); ++k) params[k] -= st.lr * grads[k];
    return;
  }
  require(st.m.size() == params.size() && st.v.size() == params.size(), ErrorKind::Shape,
          "optimizer moments sized for a different model");
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    st.m[k] = st.beta1 * st.m[k] + (1.0 - st.beta1) * grads[k];
    st.v[k] = st.beta2 * st.v[k] + (1.0 - st.beta2) * grads[k] * grads[k];
    const double mhat = st.m[k] / bc1;
    const double vhat = st.v[k] / bc2;
    params[k] -= st.lr * mhat / (std::sqrt(vhat) + st.eps);
  }
}

TrainResult train_model(const hybrid::HybridModel& model, std::vector<double> params, const Dataset& train,
                        const Dataset& test, const LossSpec& loss, OptimizerState opt, const TrainConfig& cfg,
                        const EpochCallback& on_epoch) {
  require(cfg.batch_size >= 1, ErrorKind::Configuration, "batch size must be >= 1");
  require(cfg.epochs >= 0, ErrorKind::Configuration, "epochs must be >= 0");
  require(opt.lr >= 0.0, ErrorKind::Configuration, "learning rate must be >= 0");
  if (cfg.epochs > 0) require(train.size() > 0, ErrorKind::EmptyDataset, "training set is empty");

  TrainResult res;
  const auto n = train.size();
  std::vector<std::size_t> order(n);
  const auto t0 = std::chrono::steady_clock::now();
  auto record = [&](int epoch) {
    TraceRow row;
    row.epoch = epoch;
    row.train_loss = train.size() > 0 ? evaluate_loss(model, params, train, {}, loss) : 0.0;
    row.test_loss = test.size() > 0 ? evaluate_loss(model, params, test, {}, loss) : 0.0;
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!std::isfinite(row.train_loss) || !std::isfinite(row.test_loss)) {
      throw Error(ErrorKind::TrainingDivergence, "non-finite evaluation loss at epoch " + std::to_string(epoch));
    }
    res.trace.push_back(row);
    if (on_epoch) on_epoch(row);
  };
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.shuffle_seed ^ static_cast<std::uint64_t>(epoch));
    shuffle(order, rng);
    GradOptions go;
    go.method = cfg.method;
    go.noise = cfg.noise;
    go.epoch = static_cast<std::uint64_t>(epoch);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      const auto lg = loss_and_grad(model, params, train, batch, loss, go);
      if (!std::isfinite(lg.loss)) {
        throw Error(ErrorKind::TrainingDivergence, "non-finite loss at epoch " + std::to_string(epoch) +
                                                       ", batch starting at " + std::to_string(start));
      }
      optimizer_step(opt, params, lg.grad);
    }
    record(epoch);
  }
  res.params = std::move(params);
  return res;
}

}  // namespace qsph::train
