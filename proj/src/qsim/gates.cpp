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
#include <string>

#include "qsph/error.hpp"
#include "qsph/qsim.hpp"

namespace qsph::qsim {

namespace {

struct GateInfo {
  GateKind kind;
  std::string_view name;
  int arity;
  int width;
};

constexpr std::array<GateInfo, 11> kGates{{
    {GateKind::U3, "U3", 3, 1},
    {GateKind::RX, "RX", 1, 1},
    {GateKind::RY, "RY", 1, 1},
    {GateKind::RZ, "RZ", 1, 1},
    {GateKind::H, "H", 0, 1},
    {GateKind::CNOT, "CNOT", 0, 2},
    {GateKind::CRX, "CRX", 1, 2},
    {GateKind::RXX, "RXX", 1, 2},
    {GateKind::RYY, "RYY", 1, 2},
    {GateKind::RZZ, "RZZ", 1, 2},
    {GateKind::RZX, "RZX", 1, 2},
}};

const GateInfo& info(GateKind kind) {
  for (const auto& g : kGates) {
    if (g.kind == kind) return g;
  }
  fail(ErrorKind::UnsupportedGate, "unsupported gate kind");
}

constexpr cplx kI{0.0, 1.0};

}  // namespace

std::string_view to_string(GateKind kind) { return info(kind).name; }

GateKind gate_kind_from_string(std::string_view name) {
  for (const auto& g : kGates) {
    if (g.name == name) return g.kind;
  }
  fail(ErrorKind::UnsupportedGate, "unsupported gate '" + std::string(name) + "'");
}

int gate_arity(GateKind kind) { return info(kind).arity; }
int gate_width(GateKind kind) { return info(kind).width; }

GateMatrix GateMatrix::adjoint() const {
  GateMatrix out;
  out.dim = dim;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) out(r, c) = std::conj((*this)(c, r));
  }
  return out;
}

GateMatrix gate_matrix(GateKind kind, std::span<const double> angles) {
  const int arity = gate_arity(kind);
  require(static_cast<int>(angles.size()) >= arity, ErrorKind::Contract,
          "gate " + std::string(to_string(kind)) + " needs " + std::to_string(arity) + " angles");

  GateMatrix g;
  g.dim = gate_width(kind) == 1 ? 2 : 4;
  const double half = arity > 0 ? angles[0] / 2.0 : 0.0;
  const double c = std::cos(half);
  const double s = std::sin(half);

  switch (kind) {
    case GateKind::U3: {
      const double phi = angles[1];
      const double lambda = angles[2];
      g(0, 0) = c;
      g(0, 1) = -std::polar(1.0, lambda) * s;
      g(1, 0) = std::polar(1.0, phi) * s;
      g(1, 1) = std::polar(1.0, phi + lambda) * c;
      break;
    }
    case GateKind::RX:
      g(0, 0) = c;
      g(0, 1) = -kI * s;
      g(1, 0) = -kI * s;
      g(1, 1) = c;
      break;
    case GateKind::RY:
      g(0, 0) = c;
      g(0, 1) = -s;
      g(1, 0) = s;
      g(1, 1) = c;
      break;
    case GateKind::RZ:
      g(0, 0) = std::polar(1.0, -half);
      g(1, 1) = std::polar(1.0, half);
      break;
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      g(0, 0) = r;
      g(0, 1) = r;
      g(1, 0) = r;
      g(1, 1) = -r;
      break;
    }
    case GateKind::CNOT:
      g(0, 0) = 1.0;
      g(1, 1) = 1.0;
      g(2, 3) = 1.0;
      g(3, 2) = 1.0;
      break;
    case GateKind::CRX:
      g(0, 0) = 1.0;
      g(1, 1) = 1.0;
      g(2, 2) = c;
      g(2, 3) = -kI * s;
      g(3, 2) = -kI * s;
      g(3, 3) = c;
      break;
    case GateKind::RXX:
      for (int k = 0; k < 4; ++k) {
        g(k, k) = c;
        g(k, 3 - k) = -kI * s;
      }
      break;
    case GateKind::RYY:
      for (int k = 0; k < 4; ++k) g(k, k) = c;
      g(0, 3) = kI * s;
      g(3, 0) = kI * s;
      g(1, 2) = -kI * s;
      g(2, 1) = -kI * s;
      break;
    case GateKind::RZZ:
      g(0, 0) = std::polar(1.0, -half);
      g(1, 1) = std::polar(1.0, half);
      g(2, 2) = std::polar(1.0, half);
      g(3, 3) = std::polar(1.0, -half);
      break;
    case GateKind::RZX:
      // exp(-i t/2 Z(x)X): X block with sign +1 when the Z qubit is 0, -1 when 1.
      for (int k = 0; k < 4; ++k) g(k, k) = c;
      g(0, 1) = -kI * s;
      g(1, 0) = -kI * s;
      g(2, 3) = kI * s;
      g(3, 2) = kI * s;
      break;
  }
  return g;
}

}  // namespace qsph::qsim
