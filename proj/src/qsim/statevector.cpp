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

#include <bit>
#include <cmath>
#include <string>

#include "qsph/error.hpp"
#include "qsph/qsim.hpp"

namespace qsph::qsim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity,
          "n_qubits must lie in [1, " + std::to_string(kMaxQubits) + "], got " +
              std::to_string(n_qubits));
  amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
  const std::size_t n = amplitudes.size();
  require(n >= 2 && std::has_single_bit(n), ErrorKind::Shape,
          "amplitude count must be a power of two >= 2");
  const int q = std::countr_zero(n);
  require(q <= kMaxQubits, ErrorKind::Capacity, "too many qubits");
  StateVector s;
  s.n_qubits_ = q;
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::apply(const GateMatrix& g, std::span<const int> targets) {
  const std::size_t n = amps_.size();
  if (g.dim == 2) {
    const std::size_t stride = std::size_t{1} << targets[0];
    const cplx m00 = g(0, 0), m01 = g(0, 1), m10 = g(1, 0), m11 = g(1, 1);
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const cplx a0 = amps_[i];
        const cplx a1 = amps_[i + stride];
        amps_[i] = m00 * a0 + m01 * a1;
        amps_[i + stride] = m10 * a0 + m11 * a1;
      }
    }
    return;
  }

  const std::size_t hi = std::size_t{1} << targets[0];
  const std::size_t lo = std::size_t{1} << targets[1];
  const std::size_t mask = hi | lo;
  std::array<std::size_t, 4> idx{};
  std::array<cplx, 4> in{};
  for (std::size_t i = 0; i < n; ++i) {
    if (i & mask) continue;
    idx = {i, i | lo, i | hi, i | hi | lo};
    for (int k = 0; k < 4; ++k) in[k] = amps_[idx[k]];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += g.m[static_cast<std::size_t>(r * 4 + c)] * in[c];
      amps_[idx[r]] = acc;
    }
  }
}

StateVector init_zero_state(int n_qubits) { return StateVector(n_qubits); }

std::array<double, 3> resolve_angles(const GateOp& gate, std::span<const double> params) {
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < gate.params.size() && k < 3; ++k) {
    const Param& p = gate.params[k];
    if (p.is_slot()) {
      require(static_cast<std::size_t>(p.slot) < params.size(), ErrorKind::Configuration,
              "parameter slot " + std::to_string(p.slot) + " out of bounds");
      out[k] = params[static_cast<std::size_t>(p.slot)];
    } else {
      out[k] = p.literal;
    }
  }
  return out;
}

void apply_gate(StateVector& state, const GateOp& gate, std::span<const double> angles) {
  state.apply(gate_matrix(gate.kind, angles), gate.targets);
}

double expectation_z(const StateVector& state, int qubit) {
  require(qubit >= 0 && qubit < state.n_qubits(), ErrorKind::Index,
          "qubit " + std::to_string(qubit) + " out of range");
  const std::size_t bit = std::size_t{1} << qubit;
  double acc = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double p = std::norm(amps[b]);
    acc += (b & bit) ? -p : p;
  }
  return acc;
}

std::vector<double> measure_probabilities(const StateVector& state) {
  const auto amps = state.amplitudes();
  std::vector<double> out(amps.size());
  for (std::size_t b = 0; b < amps.size(); ++b) out[b] = std::norm(amps[b]);
  return out;
}

}  // namespace qsph::qsim
