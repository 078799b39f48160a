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

// Losses, gradients, optimizers and the training loop.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qsph/hybrid.hpp"

namespace qsph::train {

/// Row-major samples.
struct Dataset {
  int in_width = 1;
  int out_width = 1;
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return in_width > 0 ? x.size() / static_cast<std::size_t>(in_width) : 0; }
  std::span<const double> x_row(std::size_t i) const {
    return {x.data() + i * static_cast<std::size_t>(in_width), static_cast<std::size_t>(in_width)};
  }
  std::span<const double> y_row(std::size_t i) const {
    return {y.data() + i * static_cast<std::size_t>(out_width), static_cast<std::size_t>(out_width)};
  }
  void push(std::span<const double> xi, std::span<const double> yi);
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Shuffled split; train gets round(frac * n) samples.
Split split_dataset(const Dataset& data, double train_frac, std::uint64_t seed);

/// Mean over samples and components of the squared difference.
double mse_loss(const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& target);

/// Residual r(x, pred); writes dr/dpred into the third argument.
using PhysicsResidual =
    std::function<double(std::span<const double> x, std::span<const double> pred, std::span<double> dr_dpred)>;

struct LossSpec {
  double data_weight = 1.0;
  double physics_weight = 0.0;
  PhysicsResidual residual;
};

struct NoiseSpec {
  double readout_sigma = 0.0;
  std::uint64_t seed = 0;
};

enum class QuantumGrad { ParameterShift, FiniteDifference };

struct GradOptions {
  QuantumGrad method = QuantumGrad::ParameterShift;
  double fd_eps = 1e-5;
  NoiseSpec noise;
  std::uint64_t epoch = 0;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Loss and full gradient over the selected samples (all samples when empty).
LossGrad loss_and_grad(const hybrid::HybridModel& model, std::span<const double> params, const Dataset& data,
                       std::span<const std::size_t> indices, const LossSpec& loss, const GradOptions& opts = {});

/// Noiseless loss over the selected samples (all samples when empty).
double evaluate_loss(const hybrid::HybridModel& model, std::span<const double> params, const Dataset& data,
                     std::span<const std::size_t> indices, const LossSpec& loss);

/// dL/d(params[slot]) by the shift rules; slot must be a quantum angle.
double parameter_shift_grad(const hybrid::HybridModel& model, std::span<const double> params, const Dataset& data,
                            std::size_t slot, const LossSpec& loss = {});

/// Backprop gradient; quantum entries are zero.
std::vector<double> classical_grad(const hybrid::HybridModel& model, std::span<const double> params,
                                   const Dataset& data, const LossSpec& loss = {});

/// Head outputs and their derivatives with respect to trainable and encoded slots.
struct QuantumJacobian {
  std::vector<double> out;      // width
  std::vector<double> d_theta;  // width x n_trainable, row-major
  std::vector<double> d_enc;    // width x n_encoded, row-major
};

/// Readout noise source for one sample; sigma = 0 disables it.
struct NoiseContext {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t sample = 0;
  std::uint64_t counter = 0;

  void perturb(std::vector<double>& h);
};

QuantumJacobian quantum_jacobian(const qnn::QuantumBlock& block, std::span<const double> trainable,
                                 std::span<const double> features, bool need_encoded, QuantumGrad method,
                                 double fd_eps, NoiseContext& noise);

/// v^T d(head)/d(features) for an Amplitude-encoded block.
std::vector<double> amplitude_vjp(const qnn::QuantumBlock& block, std::span<const double> trainable,
                                  std::span<const double> features, std::span<const double> v);

enum class OptimizerKind { SGD, Adam };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;

  static OptimizerState make(OptimizerKind kind, double lr, std::size_t n_params);
};

void optimizer_step(OptimizerState& state, std::vector<double>& params, std::span<const double> grads);

struct TraceRow {
  int epoch = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double wall_ms = 0.0;
};

struct TrainConfig {
  int batch_size = 640;
  int epochs = 500;
  std::uint64_t shuffle_seed = 0;
  QuantumGrad method = QuantumGrad::ParameterShift;
  NoiseSpec noise;
};

struct TrainResult {
  std::vector<TraceRow> trace;  // one row per epoch
  std::vector<double> params;
};

using EpochCallback = std::function<void(const TraceRow&)>;

TrainResult train_model(const hybrid::HybridModel& model, std::vector<double> params, const Dataset& train,
                        const Dataset& test, const LossSpec& loss, OptimizerState opt, const TrainConfig& cfg,
                        const EpochCallback& on_epoch = {});

}  // namespace qsph::train
