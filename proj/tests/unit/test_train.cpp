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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "../common/check.hpp"
#include "../common/oracles.hpp"
#include "qsph/app.hpp"
#include "qsph/train.hpp"

using namespace qsph;
using namespace qsph::train;
using hybrid::HybridModel;
using hybrid::Level;

namespace {

constexpr double kPi = std::numbers::pi;

/// Single-circuit model wrapped around an arbitrary circuit.
HybridModel circuit_model(const qsim::CircuitSpec& ansatz, qnn::HeadKind head, int features) {
  HybridModel m;
  m.level = Level::SingleCircuit;
  qnn::EncoderSpec e;
  e.n_features = features;
  e.lower.assign(static_cast<std::size_t>(features), -1.0);
  e.upper.assign(static_cast<std::size_t>(features), 1.0);
  m.quantum.encoder = e;
  m.quantum.circuit = qnn::with_encoding(e, ansatz);
  m.quantum.head.kind = head;
  m.quantum.head.qubits = m.quantum.circuit.readable_qubits();
  m.input_width = features;
  m.output_width = m.quantum.out_width();
  m.validate();
  return m;
}

/// Single RY(theta) on one qubit with a PauliZ head.
qnn::QuantumBlock ry_block() {
  qsim::CircuitSpec c;
  c.n_qubits = 1;
  c.n_trainable = 1;
  c.gates.push_back(qsim::GateOp{qsim::GateKind::RY, {0}, {qsim::Param::from_slot(0)}});
  qnn::QuantumBlock b;
  b.encoder.kind = qnn::EncoderKind::Amplitude;
  b.encoder.n_features = 1;
  b.circuit = c;
  b.head.kind = qnn::HeadKind::PauliZ;
  b.head.qubits = {0};
  return b;
}

/// Parallel model whose classical branch is one 1x1 Identity layer; with
/// a2 = 0 the output is a1 * (w x + b).
HybridModel linear_parallel(int in) {
  HybridModel m;
  m.level = Level::ParallelHybrid;
  m.input_width = in;
  m.output_width = 1;
  qnn::EncoderSpec e;
  e.n_features = in;
  e.lower.assign(static_cast<std::size_t>(in), -1.0);
  e.upper.assign(static_cast<std::size_t>(in), 1.0);
  m.quantum = qnn::make_block(e, {qnn::Family::ImprovedQMLP, 2, 1}, qnn::HeadKind::PauliZ, 1, false);
  m.parallel = {hybrid::DenseShape{1, in, hybrid::Activation::Identity}};
  m.validate();
  return m;
}

bool grads_agree(std::span<const double> a, std::span<const double> b) {
  bool ok = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!oracle::close(a[k], b[k], 1e-5, 1e-7)) {
      ok = false;
      MESSAGE("slot " << k << ": analytic " << a[k] << " vs fd " << b[k]);
    }
  }
  return ok;
}

}  // namespace

TEST_SUITE("train") {
  TEST_CASE("mse examples") {
    CHECK(mse_loss({{0.3, 0.4}}, {{0.3, 0.4}}) == 0.0);
    CHECK(mse_loss({{1.0}}, {{0.0}}) == 1.0);
    CHECK(mse_loss({{1.0, 1.0}}, {{0.0, 2.0}}) == 1.0);
    CHECK_KIND(mse_loss({}, {}), ErrorKind::UndefinedLoss);
    CHECK_KIND(mse_loss({{1.0}}, {{1.0, 2.0}}), ErrorKind::Shape);
  }

  TEST_CASE("shift rule examples on RY") {
    const auto b = ry_block();
    const std::vector<double> f{1.0};
    NoiseContext quiet;
    for (auto [theta, expect] : {std::pair{0.0, 0.0}, std::pair{kPi / 2, -1.0}, std::pair{1.1, -std::sin(1.1)}}) {
      const std::vector<double> th{theta};
      const auto j = quantum_jacobian(b, th, f, false, QuantumGrad::ParameterShift, 1e-5, quiet);
      CHECK(std::abs(j.out[0] - std::cos(theta)) < 1e-15);
      CHECK(std::abs(j.d_theta[0] - expect) < 1e-14);
    }
  }

  TEST_CASE("four-term CRX rule") {
    std::mt19937_64 rng(3);
    qsim::CircuitSpec c;
    c.n_qubits = 2;
    c.gates.push_back({qsim::GateKind::U3, {0}, {qsim::Param::from_slot(0), qsim::Param::from_slot(1),
                                                  qsim::Param::from_slot(2)}});
    c.gates.push_back({qsim::GateKind::CRX, {0, 1}, {qsim::Param::from_slot(3)}});
    c.n_trainable = 4;
    const auto m = circuit_model(c, qnn::HeadKind::PauliZ, 2);
    const auto data = oracle::random_dataset(2, 2, 5, rng);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = oracle::random_angles(4, rng);
      const auto fd = oracle::fd_gradient(m, p, data, {}, 1e-5);
      CHECK(oracle::close(parameter_shift_grad(m, p, data, 3), fd[3], 1e-5, 1e-7));
    }
  }

  TEST_CASE("shift gradients over random circuits with every gate kind") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 2);
      const auto c = oracle::random_circuit(n, 14, rng);
      const auto head = trial % 2 ? qnn::HeadKind::Probability : qnn::HeadKind::PauliZ;
      const auto m = circuit_model(c, head, 2);
      const auto data = oracle::random_dataset(2, m.output_width, 3, rng);
      const auto p = oracle::random_angles(static_cast<std::size_t>(c.n_trainable), rng);
      const auto lg = loss_and_grad(m, p, data, {}, {});
      const auto fd = oracle::fd_gradient(m, p, data, {}, 1e-5);
      CHECK(lg.loss == doctest::Approx(evaluate_loss(m, p, data, {}, {})).epsilon(1e-14));
      CHECK(grads_agree(lg.grad, fd));
      ++checked;
    }
    CHECK(checked == 100);
  }

  TEST_CASE("full gradient over random hybrid models") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 200; ++trial) {
      const auto r = oracle::random_recipe(rng, true);
      const auto m = hybrid::build_model(r);
      auto p = hybrid::init_params(m, rng());
      const auto data = oracle::random_dataset(r.input_width, r.output_width, 3, rng);
      const auto lg = loss_and_grad(m, p, data, {}, {});
      const auto fd = oracle::fd_gradient(m, p, data, {}, 1e-5);
      const bool ok = grads_agree(lg.grad, fd);
      if (!ok) MESSAGE("recipe level " << static_cast<int>(r.level) << " family " << static_cast<int>(r.family));
      CHECK(ok);

      // Backprop part alone equals the dense entries of the full gradient.
      const auto cg = classical_grad(m, p, data);
      const auto lay = hybrid::parameter_layout(m);
      for (std::size_t k = 0; k < cg.size(); ++k) {
        if (lay.is_quantum(k)) {
          CHECK(cg[k] == 0.0);
        } else {
          CHECK(oracle::close(cg[k], fd[k], 1e-6, 1e-7));
        }
      }
    }
  }

  TEST_CASE("finite-difference quantum gradients agree with shift rules") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      auto r = oracle::random_recipe(rng, false);
      const auto m = hybrid::build_model(r);
      const auto p = hybrid::init_params(m, rng());
      const auto data = oracle::random_dataset(r.input_width, r.output_width, 3, rng);
      GradOptions fd;
      fd.method = QuantumGrad::FiniteDifference;
      const auto a = loss_and_grad(m, p, data, {}, {});
      const auto b = loss_and_grad(m, p, data, {}, {}, fd);
      for (std::size_t k = 0; k < a.grad.size(); ++k) CHECK(oracle::close(a.grad[k], b.grad[k], 1e-4, 1e-6));
    }
  }

  TEST_CASE("classical grad examples") {
    auto m = linear_parallel(1);
    auto lay = hybrid::parameter_layout(m);
    std::vector<double> p(lay.total, 0.3);
    const std::size_t w = lay.total - 4, b = lay.total - 3;
    p[lay.total - 2] = 1.0;
    p[lay.total - 1] = 0.0;
    Dataset d;
    d.in_width = 1;
    d.out_width = 1;
    d.push(std::vector<double>{1.0}, std::vector<double>{0.0});
    p[w] = 2.0;
    p[b] = 0.0;
    CHECK(classical_grad(m, p, d)[w] == doctest::Approx(4.0).epsilon(1e-15));
    p[w] = 0.0;
    CHECK(classical_grad(m, p, d)[b] == 0.0);
    CHECK_KIND(parameter_shift_grad(m, p, d, w), ErrorKind::Contract);
  }

  TEST_CASE("optimizer examples") {
    auto sgd = OptimizerState::make(OptimizerKind::SGD, 0.1, 1);
    std::vector<double> p{1.0};
    optimizer_step(sgd, p, std::vector<double>{1.0});
    CHECK(p[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(sgd.step == 1);
    optimizer_step(sgd, p, std::vector<double>{0.0});
    CHECK(p[0] == doctest::Approx(0.9).epsilon(1e-15));

    auto adam = OptimizerState::make(OptimizerKind::Adam, 0.01, 3);
    std::vector<double> q{0.5, -0.5, 2.0};
    const auto q0 = q;
    optimizer_step(adam, q, std::vector<double>(3, 1.0));
    for (std::size_t k = 0; k < 3; ++k) CHECK(q0[k] - q[k] == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(adam.m.size() == 3);
    CHECK(adam.v.size() == 3);

    auto adam0 = OptimizerState::make(OptimizerKind::Adam, 0.01, 2);
    std::vector<double> z{0.25, 0.75};
    optimizer_step(adam0, z, std::vector<double>(2, 0.0));
    CHECK(std::abs(z[0] - 0.25) < 0.01 * 1e-8);
    CHECK(std::abs(z[1] - 0.75) < 0.01 * 1e-8);

    CHECK_KIND(optimizer_step(adam, q, std::vector<double>{1.0, std::nan(""), 0.0}), ErrorKind::TrainingDivergence);
    CHECK_KIND(optimizer_step(sgd, p, std::vector<double>{std::numeric_limits<double>::infinity()}),
               ErrorKind::TrainingDivergence);
  }

  TEST_CASE("split sizes") {
    std::mt19937_64 rng(1);
    const auto d = oracle::random_dataset(2, 1, 10, rng);
    const auto s = split_dataset(d, 0.8, 3);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);
    const auto t = split_dataset(d, 0.8, 3);
    CHECK(s.train.x == t.train.x);
    CHECK_KIND(split_dataset(d, 0.0, 3), ErrorKind::Configuration);
  }

  TEST_CASE("train_model contracts") {
    std::mt19937_64 rng(8);
    hybrid::ModelRecipe r;
    r.level = Level::CrossedHybrid;
    r.input_width = 2;
    r.n_qubits = 2;
    r.n_layers = 1;
    const auto m = hybrid::build_model(r);
    const auto p0 = hybrid::init_params(m, 4);
    const auto d = oracle::random_dataset(2, 1, 20, rng);
    const auto s = split_dataset(d, 0.8, 1);
    TrainConfig cfg;
    cfg.batch_size = 4;
    cfg.shuffle_seed = 2;

    cfg.epochs = 0;
    auto none = train_model(m, p0, s.train, s.test, {}, OptimizerState::make(OptimizerKind::Adam, 0.01, p0.size()), cfg);
    CHECK(none.trace.empty());
    CHECK(none.params == p0);

    cfg.epochs = 4;
    auto frozen = train_model(m, p0, s.train, s.test, {}, OptimizerState::make(OptimizerKind::Adam, 0.0, p0.size()), cfg);
    REQUIRE(frozen.trace.size() == 4);
    for (const auto& row : frozen.trace) CHECK(row.train_loss == frozen.trace[0].train_loss);
    CHECK(frozen.params == p0);

    auto run = [&](const LossSpec& loss, const NoiseSpec& noise) {
      TrainConfig c = cfg;
      c.noise = noise;
      return train_model(m, p0, s.train, s.test, loss, OptimizerState::make(OptimizerKind::Adam, 0.01, p0.size()), c);
    };
    const auto a = run({}, {});
    const auto b = run({}, {});
    REQUIRE(a.trace.size() == 4);
    CHECK(a.params == b.params);
    for (std::size_t e = 0; e < 4; ++e) {
      CHECK(a.trace[e].epoch == static_cast<int>(e) + 1);
      CHECK(a.trace[e].train_loss == b.trace[e].train_loss);
      CHECK(a.trace[e].test_loss == b.trace[e].test_loss);
    }

    // sigma = 0 with a seed is the noiseless pipeline.
    CHECK(run({}, NoiseSpec{0.0, 99}).params == a.params);

    // physics_weight = 0 is the pure data loss.
    LossSpec phys;
    phys.physics_weight = 0.0;
    phys.residual = [](std::span<const double>, std::span<const double> pred, std::span<double> dr) {
      dr[0] = 1.0;
      return pred[0] - 0.5;
    };
    CHECK(run(phys, {}).params == a.params);

    // Readout noise perturbs training, reproducibly.
    const auto n1 = run({}, NoiseSpec{0.01, 5});
    const auto n2 = run({}, NoiseSpec{0.01, 5});
    CHECK(n1.params == n2.params);
    CHECK(n1.params != a.params);
  }

  TEST_CASE("physics term gradient") {
    std::mt19937_64 rng(13);
    hybrid::ModelRecipe r;
    r.level = Level::CrossedHybrid;
    r.input_width = 2;
    r.n_qubits = 2;
    const auto m = hybrid::build_model(r);
    const auto p = hybrid::init_params(m, 6);
    const auto d = oracle::random_dataset(2, 1, 4, rng);
    LossSpec loss;
    loss.physics_weight = 0.7;
    loss.residual = [](std::span<const double> x, std::span<const double> pred, std::span<double> dr) {
      dr[0] = 2.0 * pred[0];
      return pred[0] * pred[0] - x[0];
    };
    const auto lg = loss_and_grad(m, p, d, {}, loss);
    const auto fd = oracle::fd_gradient(m, p, d, loss, 1e-5);
    CHECK(grads_agree(lg.grad, fd));
  }

  TEST_CASE("least squares descends monotonically below the stability bound") {
    std::mt19937_64 rng(21);
    const int in = 3;
    auto m = linear_parallel(in);
    const auto lay = hybrid::parameter_layout(m);
    const auto d = oracle::random_dataset(in, 1, 40, rng);
    // Largest eigenvalue of 2 A^T A / N with A = [X, 1], by power iteration.
    const int cols = in + 1;
    std::vector<double> g(static_cast<std::size_t>(cols * cols), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::vector<double> a(d.x_row(i).begin(), d.x_row(i).end());
      a.push_back(1.0);
      for (int r = 0; r < cols; ++r)
        for (int c = 0; c < cols; ++c) g[static_cast<std::size_t>(r * cols + c)] += 2.0 * a[r] * a[c] / d.size();
    }
    std::vector<double> v(static_cast<std::size_t>(cols), 1.0);
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
      std::vector<double> w(static_cast<std::size_t>(cols), 0.0);
      for (int r = 0; r < cols; ++r)
        for (int c = 0; c < cols; ++c) w[r] += g[static_cast<std::size_t>(r * cols + c)] * v[c];
      double n = 0.0;
      for (double x : w) n += x * x;
      lambda = std::sqrt(n);
      for (int r = 0; r < cols; ++r) v[r] = w[r] / lambda;
    }

    std::vector<double> p(lay.total, 0.2);
    p[lay.total - 2] = 1.0;
    p[lay.total - 1] = 0.0;
    auto opt = OptimizerState::make(OptimizerKind::SGD, 0.9 / lambda, p.size());
    const double start = evaluate_loss(m, p, d, {}, {});
    double prev = start;
    bool monotone = true;
    for (int step = 0; step < 200; ++step) {
      auto grad = classical_grad(m, p, d);
      for (std::size_t k = 0; k < grad.size(); ++k) {
        const bool dense = k >= lay.total - 2 - static_cast<std::size_t>(cols) && k < lay.total - 2;
        if (!dense) grad[k] = 0.0;
      }
      optimizer_step(opt, p, grad);
      const double cur = evaluate_loss(m, p, d, {}, {});
      // Round-off only once converged.
      monotone = monotone && cur <= prev * (1.0 + 1e-14);
      prev = cur;
    }
    CHECK(monotone);
    CHECK(prev < 0.9 * start);
  }

  TEST_CASE("crossed qmlp on the vortex field trends downward") {
    const auto task = app::make_field_task({});
    const auto m = hybrid::build_model(
        app::field_recipe(Level::CrossedHybrid, qnn::Family::ImprovedQMLP, qnn::HeadKind::PauliZ));
    const auto s = split_dataset(task.data, 0.8, 2);
    TrainConfig cfg;
    cfg.batch_size = 640;
    cfg.epochs = 40;
    cfg.shuffle_seed = 3;
    const auto p0 = hybrid::init_params(m, 1);
    const auto res =
        train_model(m, p0, s.train, s.test, {}, OptimizerState::make(OptimizerKind::Adam, 0.001, p0.size()), cfg);
    REQUIRE(res.trace.size() == 40);
    std::vector<double> window;
    for (int w = 0; w < 4; ++w) {
      double sum = 0.0;
      for (int e = 0; e < 10; ++e) sum += res.trace[static_cast<std::size_t>(w * 10 + e)].train_loss;
      window.push_back(sum / 10.0);
    }
    for (std::size_t w = 1; w < window.size(); ++w) CHECK(window[w] < window[w - 1]);
    for (const auto& row : res.trace) CHECK(std::isfinite(row.train_loss));
  }
}
