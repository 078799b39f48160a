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

#include <array>
#include <cmath>
#include <numbers>

#include "qsph/error.hpp"
#include "qsph/random.hpp"
#include "qsph/train.hpp"

namespace qsph::train {

using qsim::GateKind;
using qsim::GateMatrix;
using qsim::StateVector;

void NoiseContext::perturb(std::vector<double>& h) {
  if (sigma == 0.0) return;
  const std::uint64_t eval = counter++;
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] += sigma * counter_gaussian(seed, epoch, sample, (eval << 16) | k);
  }
}

namespace {

struct ShiftTerm {
  double shift;
  double coef;
};

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Two-term rule for generators with eigenvalues +-1/2; four-term rule for CRX,
// whose generator |1><1| (x) X/2 has eigenvalues {0, +-1/2}.
std::span<const ShiftTerm> shift_rule(GateKind kind) {
  static const std::array<ShiftTerm, 2> two{{{kHalfPi, 0.5}, {-kHalfPi, -0.5}}};
  static const double cp = (std::sqrt(2.0) + 1.0) / (4.0 * std::sqrt(2.0));
  static const double cm = (std::sqrt(2.0) - 1.0) / (4.0 * std::sqrt(2.0));
  static const std::array<ShiftTerm, 4> four{
      {{kHalfPi, cp}, {-kHalfPi, -cp}, {3.0 * kHalfPi, -cm}, {-3.0 * kHalfPi, cm}}};
  if (kind == GateKind::CRX) return four;
  return two;
}

std::vector<double> readout(const qnn::QuantumBlock& block, const StateVector& s, NoiseContext& noise) {
  auto h = qnn::head_readout(block.head, s);
  noise.perturb(h);
  return h;
}

void axpy(std::vector<double>& J, std::size_t cols, std::size_t col, double a, std::span<const double> h) {
  for (std::size_t k = 0; k < h.size(); ++k) J[k * cols + col] += a * h[k];
}

}  // namespace

QuantumJacobian quantum_jacobian(const qnn::QuantumBlock& block, std::span<const double> trainable,
                                 std::span<const double> features, bool need_encoded, QuantumGrad method,
                                 double fd_eps, NoiseContext& noise) {
  const auto& circuit = block.circuit;
  const auto encoded = block.encoded_params(features);
  const auto params = qsim::join_params(circuit, trainable, encoded);
  const auto init = block.initial_state(features);
  const auto n_gates = circuit.gates.size();
  const auto width = static_cast<std::size_t>(block.out_width());
  const auto n_t = static_cast<std::size_t>(circuit.n_trainable);
  const auto n_e = static_cast<std::size_t>(circuit.n_encoded);

  QuantumJacobian jac;
  jac.d_theta.assign(width * n_t, 0.0);
  jac.d_enc.assign(width * n_e, 0.0);

  if (method == QuantumGrad::FiniteDifference) {
    auto eval = [&](std::span<const double> p) {
      StateVector s = init;
      qsim::apply_circuit(s, circuit, p);
      return readout(block, s, noise);
    };
    jac.out = eval(params);
    std::vector<double> p = params;
    const std::size_t n_slots = need_encoded ? n_t + n_e : n_t;
    for (std::size_t slot = 0; slot < n_slots; ++slot) {
      p[slot] = params[slot] + fd_eps;
      const auto hp = eval(p);
      p[slot] = params[slot] - fd_eps;
      const auto hm = eval(p);
      p[slot] = params[slot];
      auto& J = slot < n_t ? jac.d_theta : jac.d_enc;
      const std::size_t cols = slot < n_t ? n_t : n_e;
      const std::size_t col = slot < n_t ? slot : slot - n_t;
      for (std::size_t k = 0; k < width; ++k) J[k * cols + col] = (hp[k] - hm[k]) / (2.0 * fd_eps);
    }
    return jac;
  }

  std::vector<std::array<double, 3>> angles(n_gates);
  std::vector<GateMatrix> mats(n_gates);
  std::vector<StateVector> prefix;
  prefix.reserve(n_gates + 1);
  prefix.push_back(init);
  for (std::size_t g = 0; g < n_gates; ++g) {
    angles[g] = qsim::resolve_angles(circuit.gates[g], params);
    mats[g] = qsim::gate_matrix(circuit.gates[g].kind, angles[g]);
    StateVector next = prefix.back();
    next.apply(mats[g], circuit.gates[g].targets);
    prefix.push_back(std::move(next));
  }
  jac.out = readout(block, prefix.back(), noise);

  for (std::size_t g = 0; g < n_gates; ++g) {
    const auto& op = circuit.gates[g];
    for (std::size_t a = 0; a < op.params.size(); ++a) {
      const auto& prm = op.params[a];
      if (!prm.is_slot()) continue;
      const auto slot = static_cast<std::size_t>(prm.slot);
      const bool is_enc = slot >= n_t;
      if (is_enc && !need_encoded) continue;
      auto& J = is_enc ? jac.d_enc : jac.d_theta;
      const std::size_t cols = is_enc ? n_e : n_t;
      const std::size_t col = is_enc ? slot - n_t : slot;
      for (const ShiftTerm& term : shift_rule(op.kind)) {
        auto shifted = angles[g];
        shifted[a] += term.shift;
        StateVector s = prefix[g];
        s.apply(qsim::gate_matrix(op.kind, shifted), op.targets);
        for (std::size_t k = g + 1; k < n_gates; ++k) s.apply(mats[k], circuit.gates[k].targets);
        axpy(J, cols, col, term.coef, readout(block, s, noise));
      }
    }
  }
  return jac;
}

std::vector<double> amplitude_vjp(const qnn::QuantumBlock& block, std::span<const double> trainable,
                                  std::span<const double> features, std::span<const double> v) {
  const auto& circuit = block.circuit;
  const auto params = qsim::join_params(circuit, trainable, {});
  const StateVector psi0 = block.initial_state(features);
  StateVector s = psi0;
  std::vector<GateMatrix> mats;
  mats.reserve(circuit.gates.size());
  for (const auto& op : circuit.gates) {
    mats.push_back(qsim::gate_matrix(op.kind, qsim::resolve_angles(op, params)));
    s.apply(mats.back(), op.targets);
  }
  const auto diag = qnn::head_observable(block.head, circuit.n_qubits, v);
  auto amps = s.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) amps[b] *= diag[b];
  for (std::size_t g = circuit.gates.size(); g-- > 0;) s.apply(mats[g].adjoint(), circuit.gates[g].targets);

  double norm2 = 0.0;
  for (double f : features) norm2 += f * f;
  const double norm = std::sqrt(norm2);
  const auto out_amps = s.amplitudes();
  std::vector<double> g(features.size());
  double dot = 0.0;
  for (std::size_t k = 0; k < features.size(); ++k) {
    g[k] = 2.0 * out_amps[k].real();
    dot += g[k] * psi0[k].real();
  }
  for (std::size_t k = 0; k < features.size(); ++k) g[k] = (g[k] - dot * psi0[k].real()) / norm;
  return g;
}

}  // namespace qsph::train
