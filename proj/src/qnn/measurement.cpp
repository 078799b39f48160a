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

#include <algorithm>
#include <bit>
#include <string>

#include "qsph/error.hpp"
#include "qsph/qnn.hpp"

namespace qsph::qnn {

using nlohmann::json;

std::string_view to_string(HeadKind k) { return k == HeadKind::PauliZ ? "pauliz" : "prob"; }

HeadKind head_kind_from_string(std::string_view s) {
  if (s == "pauliz") return HeadKind::PauliZ;
  if (s == "prob") return HeadKind::Probability;
  fail(ErrorKind::Configuration, "unknown head '" + std::string(s) + "' (expected pauliz|prob)");
}

int MeasurementHead::width() const {
  if (kind == HeadKind::PauliZ) return static_cast<int>(qubits.size());
  if (parity) return 1;
  return 1 << qubits.size();
}

namespace {

// Observable value O_k(b) of head output k on basis state b.
template <typename Fn>
void for_each_term(const MeasurementHead& head, std::size_t n_states, Fn&& fn) {
  for (std::size_t b = 0; b < n_states; ++b) {
    if (head.kind == HeadKind::PauliZ) {
      for (std::size_t k = 0; k < head.qubits.size(); ++k) {
        fn(b, k, ((b >> head.qubits[k]) & 1U) ? -1.0 : 1.0);
      }
    } else {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < head.qubits.size(); ++k) idx |= ((b >> head.qubits[k]) & 1U) << k;
      if (head.parity) {
        fn(b, 0, (std::popcount(idx) & 1) ? -1.0 : 1.0);
      } else {
        fn(b, idx, 1.0);
      }
    }
  }
}

}  // namespace

std::vector<double> head_readout(const MeasurementHead& head, std::span<const double> probs) {
  std::vector<double> out(static_cast<std::size_t>(head.width()), 0.0);
  for_each_term(head, probs.size(), [&](std::size_t b, std::size_t k, double o) { out[k] += o * probs[b]; });
  return out;
}

std::vector<double> head_readout(const MeasurementHead& head, const qsim::StateVector& state) {
  const auto probs = qsim::measure_probabilities(state);
  return head_readout(head, probs);
}

std::vector<double> head_observable(const MeasurementHead& head, int n_qubits, std::span<const double> v) {
  std::vector<double> diag(std::size_t{1} << n_qubits, 0.0);
  for_each_term(head, diag.size(), [&](std::size_t b, std::size_t k, double o) { diag[b] += v[k] * o; });
  return diag;
}

void QuantumBlock::validate() const {
  encoder.validate();
  circuit.validate();
  require(!head.qubits.empty(), ErrorKind::Configuration, "measurement head reads no qubits");
  const auto readable = circuit.readable_qubits();
  for (int q : head.qubits) {
    require(std::find(readable.begin(), readable.end(), q) != readable.end(), ErrorKind::Configuration,
            "head reads qubit " + std::to_string(q) + " which is not active");
  }
  if (encoder.kind == EncoderKind::Angle) {
    require(circuit.n_encoded == encoder.n_features, ErrorKind::Configuration,
            "circuit encoded slots do not match encoder features");
  } else {
    require(circuit.n_encoded == 0, ErrorKind::Configuration, "amplitude encoder takes no encoded slots");
    require(encoder_qubits(encoder) <= circuit.n_qubits, ErrorKind::Configuration,
            "amplitude encoder needs more qubits than the circuit has");
  }
}

qsim::StateVector QuantumBlock::initial_state(std::span<const double> features) const {
  if (encoder.kind == EncoderKind::Amplitude) return amplitude_state(encoder, features, circuit.n_qubits);
  return qsim::StateVector(circuit.n_qubits);
}

std::vector<double> QuantumBlock::encoded_params(std::span<const double> features) const {
  if (encoder.kind == EncoderKind::Amplitude) return {};
  return encoding_angles(encoder, features);
}

QuantumBlock make_block(const EncoderSpec& encoder, const AnsatzSpec& ansatz, HeadKind head_kind,
                        int head_qubits, bool parity) {
  QuantumBlock b;
  b.encoder = encoder;
  b.circuit = with_encoding(encoder, build_ansatz(ansatz));
  b.head.kind = head_kind;
  b.head.parity = parity && head_kind == HeadKind::Probability;
  auto readable = b.circuit.readable_qubits();
  if (head_qubits >= 0 && head_qubits < static_cast<int>(readable.size())) {
    readable.resize(static_cast<std::size_t>(head_qubits));
  }
  b.head.qubits = std::move(readable);
  b.validate();
  return b;
}

std::vector<double> quantum_forward(const QuantumBlock& block, std::span<const double> trainable,
                                    std::span<const double> features) {
  auto state = block.initial_state(features);
  const auto encoded = block.encoded_params(features);
  const auto params = qsim::join_params(block.circuit, trainable, encoded);
  qsim::apply_circuit(state, block.circuit, params);
  return head_readout(block.head, state);
}

json to_json(const EncoderSpec& e) {
  json j;
  j["kind"] = e.kind == EncoderKind::Angle ? "angle" : "amplitude";
  j["n_features"] = e.n_features;
  if (e.kind == EncoderKind::Angle) {
    j["angle_scale"] = e.angle_scale;
    if (!e.lower.empty()) {
      j["lower"] = e.lower;
      j["upper"] = e.upper;
    }
  }
  return j;
}

EncoderSpec encoder_from_json(const json& j) {
  EncoderSpec e;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "angle") {
    e.kind = EncoderKind::Angle;
  } else if (kind == "amplitude") {
    e.kind = EncoderKind::Amplitude;
  } else {
    fail(ErrorKind::Configuration, "unknown encoder kind '" + kind + "'");
  }
  e.n_features = j.at("n_features").get<int>();
  e.angle_scale = j.value("angle_scale", e.angle_scale);
  if (j.contains("lower")) e.lower = j.at("lower").get<std::vector<double>>();
  if (j.contains("upper")) e.upper = j.at("upper").get<std::vector<double>>();
  e.validate();
  return e;
}

json to_json(const MeasurementHead& h) {
  json j;
  j["kind"] = std::string(to_string(h.kind));
  j["qubits"] = h.qubits;
  if (h.parity) j["parity"] = true;
  return j;
}

MeasurementHead head_from_json(const json& j) {
  MeasurementHead h;
  h.kind = head_kind_from_string(j.at("kind").get<std::string>());
  h.qubits = j.at("qubits").get<std::vector<int>>();
  h.parity = j.value("parity", false);
  return h;
}

json to_json(const QuantumBlock& b) {
  json j;
  j["encoder"] = to_json(b.encoder);
  j["circuit"] = qsim::to_json(b.circuit);
  j["head"] = to_json(b.head);
  return j;
}

QuantumBlock block_from_json(const json& j) {
  QuantumBlock b;
  try {
    b.encoder = encoder_from_json(j.at("encoder"));
    b.circuit = qsim::circuit_from_json(j.at("circuit"));
    b.head = head_from_json(j.at("head"));
  } catch (const json::exception& e) {
    fail(ErrorKind::Configuration, std::string("malformed quantum block JSON: ") + e.what());
  }
  b.validate();
  return b;
}

}  // namespace qsph::qnn
