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

// Encoders, ansatz families and measurement heads.

#pragma once

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsph/qsim.hpp"

namespace qsph::qnn {

enum class EncoderKind { Angle, Amplitude };

struct EncoderSpec {
  EncoderKind kind = EncoderKind::Angle;
  int n_features = 1;
  double angle_scale = std::numbers::pi;
  /// Per-feature (min, max); Angle only. Empty means [0, 1] for every feature.
  std::vector<double> lower;
  std::vector<double> upper;

  double lo(int k) const { return lower.empty() ? 0.0 : lower[static_cast<std::size_t>(k)]; }
  double hi(int k) const { return upper.empty() ? 1.0 : upper[static_cast<std::size_t>(k)]; }
  void validate() const;
};

/// Minimal qubit count able to hold the encoding.
int encoder_qubits(const EncoderSpec& spec);

/// RY angle for each feature under the Angle encoder.
std::vector<double> encoding_angles(const EncoderSpec& spec, std::span<const double> features);

/// d(angle_k)/d(feature_k) under the Angle encoder.
double angle_slope(const EncoderSpec& spec, int k);

/// Normalised, zero-padded amplitude state on n_qubits.
qsim::StateVector amplitude_state(const EncoderSpec& spec, std::span<const double> features, int n_qubits);

/// Prepends the Angle encoder's RY gates to an ansatz. Encoded slots follow
/// the trainable slots; feature k lands on qubit k mod n_qubits.
qsim::CircuitSpec with_encoding(const EncoderSpec& spec, const qsim::CircuitSpec& ansatz);

enum class Family { GeneralQNN, ImprovedQMLP, QCNN };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

struct AnsatzSpec {
  Family family = Family::ImprovedQMLP;
  int n_qubits = 4;
  int n_layers = 1;
  /// QCNN only: number of pooling stages, -1 halves until two qubits remain.
  int qcnn_pool_stages = -1;
};

/// Trainable slot count for a family without building the circuit.
int trainable_count(const AnsatzSpec& spec);

qsim::CircuitSpec build_ansatz(const AnsatzSpec& spec);
qsim::CircuitSpec build_qcnn(const AnsatzSpec& spec);

/// Gate kinds of the QCNN dense layer, in order.
const std::vector<qsim::GateKind>& qcnn_dense_sequence();

enum class HeadKind { PauliZ, Probability };

std::string_view to_string(HeadKind k);
HeadKind head_kind_from_string(std::string_view s);

struct MeasurementHead {
  HeadKind kind = HeadKind::PauliZ;
  std::vector<int> qubits;
  /// Probability only: collapse the distribution to one parity expectation.
  bool parity = false;

  int width() const;
};

/// Head outputs from measurement probabilities.
std::vector<double> head_readout(const MeasurementHead& head, std::span<const double> probs);
std::vector<double> head_readout(const MeasurementHead& head, const qsim::StateVector& state);

/// Diagonal observable sum_k v_k O_k in the computational basis.
std::vector<double> head_observable(const MeasurementHead& head, int n_qubits, std::span<const double> v);

/// Encoder + circuit (encoding prefix included for Angle) + head.
struct QuantumBlock {
  EncoderSpec encoder;
  qsim::CircuitSpec circuit;
  MeasurementHead head;

  int n_trainable() const { return circuit.n_trainable; }
  int in_width() const { return encoder.n_features; }
  int out_width() const { return head.width(); }
  void validate() const;

  /// State just before the first circuit gate.
  qsim::StateVector initial_state(std::span<const double> features) const;
  /// Encoded slot values passed to the circuit (empty for Amplitude).
  std::vector<double> encoded_params(std::span<const double> features) const;
};

/// Builds a block from an ansatz, with the encoder prefix and a head on the readable qubits.
QuantumBlock make_block(const EncoderSpec& encoder, const AnsatzSpec& ansatz, HeadKind head_kind,
                        int head_qubits, bool parity);

std::vector<double> quantum_forward(const QuantumBlock& block, std::span<const double> trainable,
                                    std::span<const double> features);

nlohmann::json to_json(const EncoderSpec& e);
EncoderSpec encoder_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MeasurementHead& h);
MeasurementHead head_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QuantumBlock& b);
QuantumBlock block_from_json(const nlohmann::json& j);

}  // namespace qsph::qnn
