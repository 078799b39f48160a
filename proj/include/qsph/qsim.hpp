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

// Dense statevector simulation of parameterized circuits.
//
// Bit ordering: qubit q is bit q of the amplitude index (qubit 0 is the
// least-significant bit). Two-qubit gate matrices are written in the basis
// |t0 t1>, index (b(t0) << 1) | b(t1), so targets[0] is the high bit of the
// 4x4 block and is the control for CNOT and CRX.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qsph::qsim {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 20;

enum class GateKind { U3, RX, RY, RZ, H, CNOT, CRX, RXX, RYY, RZZ, RZX };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Number of angles the gate consumes.
int gate_arity(GateKind kind);
/// Number of qubits the gate acts on.
int gate_width(GateKind kind);

/// A gate angle: either an index into the circuit parameter vector or a
/// fixed literal.
struct Param {
  int slot = -1;
  double literal = 0.0;

  static Param from_slot(int s) { return Param{s, 0.0}; }
  static Param from_literal(double v) { return Param{-1, v}; }
  bool is_slot() const { return slot >= 0; }
};

struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::vector<Param> params;
};

/// Row-major gate matrix, 2x2 or 4x4.
struct GateMatrix {
  int dim = 2;
  std::array<cplx, 16> m{};

  cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(r * dim + c)]; }
  cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(r * dim + c)]; }
  GateMatrix adjoint() const;
};

/// Exact matrix of the given gate kind at the given angles.
GateMatrix gate_matrix(GateKind kind, std::span<const double> angles);

class StateVector {
 public:
  /// |0...0> on n qubits; throws a capacity error outside [1, kMaxQubits].
  explicit StateVector(int n_qubits);

  /// Takes ownership of raw amplitudes; length must be a power of two.
  static StateVector from_amplitudes(std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

  void apply(const GateMatrix& g, std::span<const int> targets);

 private:
  StateVector() = default;
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

StateVector init_zero_state(int n_qubits);

/// Resolves the gate's angles against a flat parameter vector
/// (trainable slots first, then encoded slots).
std::array<double, 3> resolve_angles(const GateOp& gate, std::span<const double> params);

void apply_gate(StateVector& state, const GateOp& gate, std::span<const double> angles);

struct CircuitSpec {
  int n_qubits = 1;
  std::vector<GateOp> gates;
  int n_trainable = 0;
  int n_encoded = 0;
  /// Qubits still readable after pooling; empty means all qubits.
  std::vector<int> active_qubits;

  int n_params() const { return n_trainable + n_encoded; }
  std::vector<int> readable_qubits() const;

  /// Checks targets, arities and slot bounds; throws a configuration error.
  void validate() const;
};

/// Concatenates trainable and encoded vectors into the flat slot vector.
std::vector<double> join_params(const CircuitSpec& circuit, std::span<const double> trainable,
                                std::span<const double> encoded);

/// Applies every gate of the circuit, in order, to an existing state.
void apply_circuit(StateVector& state, const CircuitSpec& circuit, std::span<const double> params);

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> trainable,
                        std::span<const double> encoded);

double expectation_z(const StateVector& state, int qubit);
std::vector<double> measure_probabilities(const StateVector& state);

nlohmann::json to_json(const CircuitSpec& circuit);
CircuitSpec circuit_from_json(const nlohmann::json& j);

}  // namespace qsph::qsim
