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
#include "qsph/qnn.hpp"

namespace qsph::qnn {

using qsim::CircuitSpec;
using qsim::GateKind;
using qsim::GateOp;
using qsim::Param;

void EncoderSpec::validate() const {
  require(n_features >= 1, ErrorKind::Configuration, "encoder needs at least one feature");
  if (kind == EncoderKind::Angle) {
    require(lower.empty() == upper.empty(), ErrorKind::Configuration, "encoder bounds incomplete");
    if (!lower.empty()) {
      require(static_cast<int>(lower.size()) == n_features && static_cast<int>(upper.size()) == n_features,
              ErrorKind::Configuration, "encoder bounds length != n_features");
      for (int k = 0; k < n_features; ++k) {
        require(hi(k) > lo(k), ErrorKind::Configuration,
                "encoder bound max <= min for feature " + std::to_string(k));
      }
    }
  } else {
    require(encoder_qubits(*this) <= qsim::kMaxQubits, ErrorKind::Capacity,
            "amplitude encoder needs too many qubits");
  }
}

int encoder_qubits(const EncoderSpec& spec) {
  if (spec.kind == EncoderKind::Angle) return 1;
  const auto n = static_cast<std::size_t>(spec.n_features);
  return std::max(1, static_cast<int>(std::bit_width(n - 1)));
}

double angle_slope(const EncoderSpec& spec, int k) { return spec.angle_scale / (spec.hi(k) - spec.lo(k)); }

std::vector<double> encoding_angles(const EncoderSpec& spec, std::span<const double> features) {
  require(static_cast<int>(features.size()) == spec.n_features, ErrorKind::Shape,
          "expected " + std::to_string(spec.n_features) + " features, got " + std::to_string(features.size()));
  std::vector<double> angles(features.size());
  for (int k = 0; k < spec.n_features; ++k) {
    angles[static_cast<std::size_t>(k)] = angle_slope(spec, k) * (features[static_cast<std::size_t>(k)] - spec.lo(k));
  }
  return angles;
}

qsim::StateVector amplitude_state(const EncoderSpec& spec, std::span<const double> features, int n_qubits) {
  require(static_cast<int>(features.size()) == spec.n_features, ErrorKind::Shape,
          "expected " + std::to_string(spec.n_features) + " features, got " + std::to_string(features.size()));
  require(n_qubits >= encoder_qubits(spec), ErrorKind::Configuration, "too few qubits for amplitude encoding");
  double norm2 = 0.0;
  for (double f : features) {
    require(std::isfinite(f), ErrorKind::DegenerateEncoding, "non-finite feature");
    norm2 += f * f;
  }
  require(norm2 > 0.0, ErrorKind::DegenerateEncoding, "all-zero feature vector cannot be amplitude encoded");
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<qsim::cplx> amps(std::size_t{1} << n_qubits, 0.0);
  for (std::size_t k = 0; k < features.size(); ++k) amps[k] = features[k] * inv;
  return qsim::StateVector::from_amplitudes(std::move(amps));
}

CircuitSpec with_encoding(const EncoderSpec& spec, const CircuitSpec& ansatz) {
  CircuitSpec out = ansatz;
  if (spec.kind == EncoderKind::Amplitude) return out;
  out.n_encoded = spec.n_features;
  std::vector<GateOp> gates;
  gates.reserve(ansatz.gates.size() + static_cast<std::size_t>(spec.n_features));
  for (int k = 0; k < spec.n_features; ++k) {
    gates.push_back(GateOp{GateKind::RY, {k % ansatz.n_qubits}, {Param::from_slot(ansatz.n_trainable + k)}});
  }
  gates.insert(gates.end(), ansatz.gates.begin(), ansatz.gates.end());
  out.gates = std::move(gates);
  return out;
}

}  // namespace qsph::qnn
