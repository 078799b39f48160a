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
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "../common/check.hpp"
#include "../common/oracles.hpp"
#include "qsph/qnn.hpp"

using namespace qsph;
using namespace qsph::qnn;
using qsim::GateKind;

namespace {

EncoderSpec angle_encoder(int n, double lo = 0.0, double hi = 1.0) {
  EncoderSpec e;
  e.kind = EncoderKind::Angle;
  e.n_features = n;
  e.lower.assign(static_cast<std::size_t>(n), lo);
  e.upper.assign(static_cast<std::size_t>(n), hi);
  return e;
}

EncoderSpec amplitude_encoder(int n) {
  EncoderSpec e;
  e.kind = EncoderKind::Amplitude;
  e.n_features = n;
  return e;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

}  // namespace

TEST_SUITE("qnn") {
  TEST_CASE("amplitude encoding examples") {
    const std::vector<double> f1{1.0, 0.0, 0.0, 0.0};
    auto s1 = amplitude_state(amplitude_encoder(4), f1, 2);
    CHECK(s1[0] == qsim::cplx(1.0, 0.0));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s1[i]) == 0.0);

    const std::vector<double> f2{3.0, 4.0};
    auto s2 = amplitude_state(amplitude_encoder(2), f2, 1);
    CHECK(std::abs(s2[0] - 0.6) < 1e-15);
    CHECK(std::abs(s2[1] - 0.8) < 1e-15);

    const std::vector<double> zero{0.0, 0.0, 0.0};
    CHECK_KIND(amplitude_state(amplitude_encoder(3), zero, 2), ErrorKind::DegenerateEncoding);
    CHECK(encoder_qubits(amplitude_encoder(5)) == 3);
    CHECK(encoder_qubits(amplitude_encoder(4)) == 2);
  }

  TEST_CASE("angle encoding at lower bound is a zero rotation") {
    auto e = angle_encoder(1, -2.0, 3.0);
    const double x = -2.0;
    const auto a = encoding_angles(e, std::span<const double>(&x, 1));
    CHECK(a[0] == 0.0);
    const double top = 3.0;
    CHECK(encoding_angles(e, std::span<const double>(&top, 1))[0] == doctest::Approx(std::numbers::pi));

    qsim::CircuitSpec empty;
    empty.n_qubits = 1;
    const auto c = with_encoding(e, empty);
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0].kind == GateKind::RY);
    const auto s = qsim::run_circuit(c, {}, a);
    CHECK(s[0] == qsim::cplx(1.0, 0.0));
    CHECK(std::abs(s[1]) == 0.0);
  }

  TEST_CASE("amplitude encoding then measurement reproduces normalised squares") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 16);
      const auto f = random_vec(static_cast<std::size_t>(n), rng, -2.0, 2.0);
      const auto enc = amplitude_encoder(n);
      const int q = encoder_qubits(enc);
      const auto p = qsim::measure_probabilities(amplitude_state(enc, f, q));
      double n2 = 0.0;
      for (double v : f) n2 += v * v;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double ref = k < f.size() ? f[k] * f[k] / n2 : 0.0;
        CHECK(std::abs(p[k] - ref) < 1e-10);
      }
    }
  }

  TEST_CASE("ansatz slot counts") {
    CHECK(build_ansatz({Family::ImprovedQMLP, 4, 1}).n_trainable == 16);
    CHECK(build_ansatz({Family::GeneralQNN, 4, 2}).n_trainable == 24);
    for (int n : {2, 4, 8}) {
      for (int l : {1, 2, 3}) {
        CHECK(build_ansatz({Family::GeneralQNN, n, l}).n_trainable == 3 * n * l);
        CHECK(build_ansatz({Family::ImprovedQMLP, n, l}).n_trainable == 4 * n * l);
        const AnsatzSpec q{Family::QCNN, n, l};
        int stages = 0;
        for (int m = n; m > 2; m /= 2) ++stages;
        CHECK(build_qcnn(q).n_trainable == stages * (3 * l + 1) + 15);
        CHECK(trainable_count(q) == build_qcnn(q).n_trainable);
        CHECK(trainable_count({Family::ImprovedQMLP, n, l}) == 4 * n * l);
      }
    }
    CHECK_KIND(build_ansatz({Family::ImprovedQMLP, 1, 1}), ErrorKind::Configuration);
    CHECK_KIND(build_ansatz({Family::GeneralQNN, 1, 1}), ErrorKind::Configuration);
  }

  TEST_CASE("layer structure") {
    const auto c = build_ansatz({Family::ImprovedQMLP, 4, 1});
    REQUIRE(c.gates.size() == 8);
    for (int q = 0; q < 4; ++q) {
      CHECK(c.gates[static_cast<std::size_t>(q)].kind == GateKind::U3);
      CHECK(c.gates[static_cast<std::size_t>(q)].targets == std::vector<int>{q});
      const auto& g = c.gates[static_cast<std::size_t>(4 + q)];
      CHECK(g.kind == GateKind::CRX);
      CHECK(g.targets == std::vector<int>{q, (q + 1) % 4});
    }
    std::set<int> slots;
    for (const auto& g : c.gates)
      for (const auto& p : g.params) slots.insert(p.slot);
    CHECK(slots.size() == 16);

    const auto qnn = build_ansatz({Family::GeneralQNN, 3, 2});
    int cnot = 0;
    for (const auto& g : qnn.gates) cnot += g.kind == GateKind::CNOT;
    CHECK(cnot == 6);
  }

  TEST_CASE("qcnn dense sequence and pooling") {
    const std::vector<GateKind> expected{GateKind::RZZ, GateKind::RXX, GateKind::RYY, GateKind::RZX, GateKind::RZX,
                                         GateKind::RXX, GateKind::RZX, GateKind::RZZ, GateKind::RYY, GateKind::RZZ,
                                         GateKind::RXX, GateKind::RZX, GateKind::RZX, GateKind::RZZ, GateKind::RYY};
    CHECK(qcnn_dense_sequence() == expected);

    AnsatzSpec s{Family::QCNN, 8, 1, 2};
    const auto c = build_qcnn(s);
    CHECK(c.readable_qubits().size() == 2);

    // Conv stage: one shared angle per Ising kind.
    std::set<int> conv_slots;
    for (const auto& g : c.gates) {
      if (g.kind == GateKind::RXX || g.kind == GateKind::RYY || g.kind == GateKind::RZZ) {
        if (g.params[0].slot < 3) conv_slots.insert(g.params[0].slot);
      }
    }
    CHECK(conv_slots.size() == 3);

    // Halving per stage, and discarded qubits never touched again.
    std::set<int> discarded;
    std::size_t active = 8;
    for (const auto& g : c.gates) {
      for (int t : g.targets) CHECK(discarded.count(t) == 0);
      if (g.kind == GateKind::CRX) discarded.insert(g.targets[0]);
    }
    active -= discarded.size();
    CHECK(active == 2);
    for (int q : c.readable_qubits()) CHECK(discarded.count(q) == 0);

    // Dense layer pairs (i mod m, (i+1) mod m) over the two survivors.
    const auto survivors = c.readable_qubits();
    const std::size_t dense0 = c.gates.size() - 15;
    for (std::size_t i = 0; i < 15; ++i) {
      const auto& g = c.gates[dense0 + i];
      CHECK(g.kind == expected[i]);
      CHECK(g.targets[0] == survivors[i % 2]);
      CHECK(g.targets[1] == survivors[(i + 1) % 2]);
    }

    CHECK_KIND(build_qcnn({Family::QCNN, 6, 1, 2}), ErrorKind::Configuration);
    CHECK(build_qcnn({Family::QCNN, 16, 1}).readable_qubits().size() == 2);
    CHECK(build_qcnn({Family::QCNN, 16, 1, 1}).readable_qubits().size() == 8);
  }

  TEST_CASE("quantum forward examples") {
    const auto enc = angle_encoder(4);
    auto b = make_block(enc, {Family::GeneralQNN, 4, 1}, HeadKind::PauliZ, -1, false);
    const std::vector<double> theta(static_cast<std::size_t>(b.n_trainable()), 0.0);
    const std::vector<double> x(4, 0.0);
    const auto out = quantum_forward(b, theta, x);
    REQUIRE(out.size() == 4);
    for (double v : out) CHECK(std::abs(v - 1.0) < 1e-15);

    std::mt19937_64 rng(23);
    for (Family fam : {Family::GeneralQNN, Family::ImprovedQMLP, Family::QCNN}) {
      auto pz = make_block(enc, {fam, 4, 2}, HeadKind::PauliZ, -1, false);
      auto pr = make_block(enc, {fam, 4, 2}, HeadKind::Probability, -1, false);
      CHECK(pr.out_width() == (1 << pr.head.qubits.size()));
      for (int trial = 0; trial < 20; ++trial) {
        const auto th = oracle::random_angles(static_cast<std::size_t>(pz.n_trainable()), rng);
        const auto f = random_vec(4, rng, 0.0, 1.0);
        for (double v : quantum_forward(pz, th, f)) CHECK(std::abs(v) <= 1.0 + 1e-12);
        double sum = 0.0;
        for (double v : quantum_forward(pr, th, f)) {
          CHECK(v >= 0.0);
          sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
      }
    }
  }

  TEST_CASE("parity head") {
    auto b = make_block(angle_encoder(2), {Family::ImprovedQMLP, 2, 1}, HeadKind::Probability, -1, true);
    CHECK(b.out_width() == 1);
    std::mt19937_64 rng(4);
    const auto th = oracle::random_angles(static_cast<std::size_t>(b.n_trainable()), rng);
    const std::vector<double> f{0.3, 0.8};
    const auto s = qsim::run_circuit(b.circuit, th, b.encoded_params(f));
    const auto p = qsim::measure_probabilities(s);
    const double parity = p[0] - p[1] - p[2] + p[3];
    CHECK(std::abs(quantum_forward(b, th, f)[0] - parity) < 1e-12);
  }

  TEST_CASE("forward is permutation-equivariant under qubit relabelling") {
    std::mt19937_64 rng(31);
    const std::vector<int> perm{2, 0, 1};
    for (int trial = 0; trial < 20; ++trial) {
      auto b = make_block(angle_encoder(3), {Family::ImprovedQMLP, 3, 2}, HeadKind::PauliZ, -1, false);
      auto rb = b;
      for (auto& g : rb.circuit.gates)
        for (auto& t : g.targets) t = perm[static_cast<std::size_t>(t)];
      for (auto& q : rb.head.qubits) q = perm[static_cast<std::size_t>(q)];
      const auto th = oracle::random_angles(static_cast<std::size_t>(b.n_trainable()), rng);
      const auto f = random_vec(3, rng, 0.0, 1.0);
      const auto y = quantum_forward(b, th, f);
      const auto ry = quantum_forward(rb, th, f);
      for (std::size_t k = 0; k < y.size(); ++k) CHECK(std::abs(y[k] - ry[k]) < 1e-12);

      // Same check on the independent full-matrix oracle.
      auto c = b.circuit;
      auto rc = rb.circuit;
      const auto joined = qsim::join_params(c, th, b.encoded_params(f));
      const auto s = oracle::brute_force_run(c, joined);
      const auto rs = oracle::brute_force_run(rc, joined);
      for (std::size_t idx = 0; idx < 8; ++idx) {
        std::size_t ridx = 0;
        for (int q = 0; q < 3; ++q)
          if ((idx >> q) & 1u) ridx |= std::size_t{1} << perm[static_cast<std::size_t>(q)];
        CHECK(std::abs(s[idx] - rs[ridx]) < 1e-12);
      }
    }
  }

  TEST_CASE("block JSON round trip") {
    auto b = make_block(angle_encoder(3, -1.0, 1.0), {Family::QCNN, 4, 1}, HeadKind::Probability, -1, false);
    const auto j = to_json(b);
    const auto back = block_from_json(j);
    CHECK(to_json(back) == j);
    std::mt19937_64 rng(8);
    const auto th = oracle::random_angles(static_cast<std::size_t>(b.n_trainable()), rng);
    const std::vector<double> f{0.1, -0.5, 0.9};
    CHECK(quantum_forward(b, th, f) == quantum_forward(back, th, f));
    CHECK_KIND(family_from_string("resnet"), ErrorKind::Configuration);
  }
}
