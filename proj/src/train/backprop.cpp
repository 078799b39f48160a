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

#include <cmath>
#include <numeric>
#include <string>

#include "qsph/error.hpp"
#include "qsph/train.hpp"

namespace qsph::train {

using hybrid::DenseShape;
using hybrid::HybridModel;
using hybrid::Level;
using hybrid::ParamLayout;

double mse_loss(const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& target) {
  require(!pred.empty(), ErrorKind::UndefinedLoss, "mean squared error of an empty set is undefined");
  require(pred.size() == target.size(), ErrorKind::Shape, "prediction and target counts differ");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    require(pred[i].size() == target[i].size(), ErrorKind::Shape, "prediction and target widths differ");
    for (std::size_t k = 0; k < pred[i].size(); ++k) {
      const double d = pred[i][k] - target[i][k];
      acc += d * d;
    }
    count += pred[i].size();
  }
  require(count > 0, ErrorKind::UndefinedLoss, "mean squared error over zero components is undefined");
  return acc / static_cast<double>(count);
}

namespace {

struct LayerCache {
  std::vector<double> in;
  std::vector<double> z;
  std::vector<double> y;
};

struct StackRun {
  std::vector<LayerCache> layers;
  const std::vector<double>& out() const { return layers.back().y; }
};

StackRun run_stack(const std::vector<DenseShape>& stack, const ParamLayout& layout, std::size_t& seg,
                   std::span<const double> params, std::span<const double> x) {
  StackRun run;
  std::vector<double> cur(x.begin(), x.end());
  for (const auto& shape : stack) {
    const auto& s = layout.segments[seg++];
    LayerCache c;
    c.in = cur;
    hybrid::dense_apply(shape, params.subspan(s.offset, s.size), cur, c.z, c.y);
    cur = c.y;
    run.layers.push_back(std::move(c));
  }
  return run;
}

// Accumulates parameter gradients into grad and returns dL/d(stack input).
std::vector<double> back_stack(const std::vector<DenseShape>& stack, const StackRun& run, const ParamLayout& layout,
                               std::size_t first_seg, std::span<const double> params, std::vector<double> g,
                               std::vector<double>& grad) {
  for (std::size_t l = stack.size(); l-- > 0;) {
    const auto& shape = stack[l];
    const auto& c = run.layers[l];
    const auto& s = layout.segments[first_seg + l];
    const auto rows = static_cast<std::size_t>(shape.rows);
    const auto cols = static_cast<std::size_t>(shape.cols);
    std::vector<double> delta(rows);
    for (std::size_t r = 0; r < rows; ++r) delta[r] = g[r] * hybrid::activate_deriv(shape.act, c.z[r], c.y[r]);
    std::vector<double> g_in(cols, 0.0);
    const double* w = params.data() + s.offset;
    double* gw = grad.data() + s.offset;
    double* gb = gw + rows * cols;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < cols; ++k) {
        gw[r * cols + k] += delta[r] * c.in[k];
        g_in[k] += w[r * cols + k] * delta[r];
      }
      gb[r] += delta[r];
    }
    g = std::move(g_in);
  }
  return g;
}

std::vector<std::size_t> resolve_indices(const Dataset& data, std::span<const std::size_t> indices) {
  if (!indices.empty()) return {indices.begin(), indices.end()};
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return all;
}

void check_data(const HybridModel& model, const Dataset& data) {
  require(data.in_width == model.input_width && data.out_width == model.output_width, ErrorKind::Configuration,
          "dataset widths do not match the model");
}

double sample_loss_terms(const LossSpec& loss, std::span<const double> x, std::span<const double> pred,
                         std::span<const double> target, double n, std::vector<double>* g_out) {
  const double w = static_cast<double>(pred.size());
  double l = 0.0;
  if (g_out != nullptr) g_out->assign(pred.size(), 0.0);
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double d = pred[k] - target[k];
    l += loss.data_weight * d * d / (n * w);
    if (g_out != nullptr) (*g_out)[k] += loss.data_weight * 2.0 * d / (n * w);
  }
  if (loss.physics_weight != 0.0 && loss.residual) {
    std::vector<double> dr(pred.size(), 0.0);
    const double r = loss.residual(x, pred, dr);
    l += loss.physics_weight * r * r / n;
    if (g_out != nullptr) {
      for (std::size_t k = 0; k < pred.size(); ++k) (*g_out)[k] += loss.physics_weight * 2.0 * r * dr[k] / n;
    }
  }
  return l;
}

}  // namespace

LossGrad loss_and_grad(const HybridModel& model, std::span<const double> params, const Dataset& data,
                       std::span<const std::size_t> indices, const LossSpec& loss, const GradOptions& opts) {
  check_data(model, data);
  const auto layout = parameter_layout(model);
  require(params.size() == layout.total, ErrorKind::Configuration, "parameter count does not match the model");
  const auto idx = resolve_indices(data, indices);
  require(!idx.empty(), ErrorKind::UndefinedLoss, "loss over an empty batch is undefined");

  LossGrad out;
  out.grad.assign(layout.total, 0.0);
  const double n = static_cast<double>(idx.size());
  const auto theta = params.subspan(layout.quantum_offset, layout.quantum_size);
  const bool has_front = !model.front.empty();
  const bool amplitude = model.quantum.encoder.kind == qnn::EncoderKind::Amplitude;
  const std::size_t front_seg0 = 0;
  const std::size_t back_seg0 = model.front.size() + 1;
  const std::size_t par_seg0 = back_seg0 + model.back.size();
  const auto n_t = layout.quantum_size;
  const auto n_e = static_cast<std::size_t>(model.quantum.circuit.n_encoded);

  for (std::size_t i : idx) {
    const auto x = data.x_row(i);
    std::size_t seg = front_seg0;
    const StackRun front = run_stack(model.front, layout, seg, params, x);
    const std::vector<double> features = has_front ? front.out() : std::vector<double>(x.begin(), x.end());
    ++seg;

    NoiseContext noise{opts.noise.readout_sigma, opts.noise.seed, opts.epoch, i, 0};
    const bool enc_grad = has_front && !amplitude;
    const QuantumJacobian jac =
        quantum_jacobian(model.quantum, theta, features, enc_grad, opts.method, opts.fd_eps, noise);

    const StackRun back = run_stack(model.back, layout, seg, params, jac.out);
    std::vector<double> q_out = model.back.empty() ? jac.out : back.out();

    StackRun par;
    std::vector<double> pred = q_out;
    double a1 = 0.0, a2 = 0.0;
    std::size_t agg_off = 0;
    if (model.level == Level::ParallelHybrid) {
      par = run_stack(model.parallel, layout, seg, params, x);
      agg_off = layout.segments[seg].offset;
      a1 = params[agg_off];
      a2 = params[agg_off + 1];
      for (std::size_t k = 0; k < pred.size(); ++k) pred[k] = a1 * par.out()[k] + a2 * q_out[k];
    }

    std::vector<double> g;
    out.loss += sample_loss_terms(loss, x, pred, data.y_row(i), n, &g);

    std::vector<double> g_q = g;
    if (model.level == Level::ParallelHybrid) {
      std::vector<double> g_c(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        out.grad[agg_off] += g[k] * par.out()[k];
        out.grad[agg_off + 1] += g[k] * q_out[k];
        g_c[k] = a1 * g[k];
        g_q[k] = a2 * g[k];
      }
      back_stack(model.parallel, par, layout, par_seg0, params, std::move(g_c), out.grad);
    }

    const std::vector<double> v =
        model.back.empty() ? g_q : back_stack(model.back, back, layout, back_seg0, params, g_q, out.grad);

    const std::size_t width = v.size();
    for (std::size_t k = 0; k < width; ++k) {
      if (v[k] == 0.0) continue;
      const double* row = jac.d_theta.data() + k * n_t;
      double* gq = out.grad.data() + layout.quantum_offset;
      for (std::size_t t = 0; t < n_t; ++t) gq[t] += v[k] * row[t];
    }

    if (!has_front) continue;
    std::vector<double> g_feat;
    if (amplitude) {
      g_feat = amplitude_vjp(model.quantum, theta, features, v);
    } else {
      g_feat.assign(n_e, 0.0);
      for (std::size_t e = 0; e < n_e; ++e) {
        double acc = 0.0;
        for (std::size_t k = 0; k < width; ++k) acc += v[k] * jac.d_enc[k * n_e + e];
        g_feat[e] = acc * qnn::angle_slope(model.quantum.encoder, static_cast<int>(e));
      }
    }
    back_stack(model.front, front, layout, front_seg0, params, std::move(g_feat), out.grad);
  }
  return out;
}

double evaluate_loss(const HybridModel& model, std::span<const double> params, const Dataset& data,
                     std::span<const std::size_t> indices, const LossSpec& loss) {
  check_data(model, data);
  const auto idx = resolve_indices(data, indices);
  require(!idx.empty(), ErrorKind::UndefinedLoss, "loss over an empty set is undefined");
  const double n = static_cast<double>(idx.size());
  double total = 0.0;
  for (std::size_t i : idx) {
    const auto x = data.x_row(i);
    const auto pred = hybrid::model_forward(model, x, params);
    total += sample_loss_terms(loss, x, pred, data.y_row(i), n, nullptr);
  }
  return total;
}

double parameter_shift_grad(const HybridModel& model, std::span<const double> params, const Dataset& data,
                            std::size_t slot, const LossSpec& loss) {
  const auto layout = parameter_layout(model);
  require(layout.is_quantum(slot), ErrorKind::Contract,
          "slot " + std::to_string(slot) + " is not a quantum angle slot");
  return loss_and_grad(model, params, data, {}, loss).grad[slot];
}

std::vector<double> classical_grad(const HybridModel& model, std::span<const double> params, const Dataset& data,
                                   const LossSpec& loss) {
  const auto layout = parameter_layout(model);
  auto g = loss_and_grad(model, params, data, {}, loss).grad;
  for (std::size_t k = 0; k < layout.quantum_size; ++k) g[layout.quantum_offset + k] = 0.0;
  return g;
}

}  // namespace qsph::train
