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

#include <string>

#include "qsph/error.hpp"
#include "qsph/qnn.hpp"

namespace qsph::qnn {

using qsim::CircuitSpec;
using qsim::GateKind;
using qsim::GateOp;
using qsim::Param;

namespace {

struct SlotCounter {
  int next = 0;
  Param take() { return Param::from_slot(next++); }
};

void add_u3(CircuitSpec& c, SlotCounter& slots, int q) {
  Param t = slots.take();
  Param p = slots.take();
  Param l = slots.take();
  c.gates.push_back(GateOp{GateKind::U3, {q}, {t, p, l}});
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::GeneralQNN:
      return "qnn";
    case Family::ImprovedQMLP:
      return "qmlp";
    case Family::QCNN:
      return "qcnn";
  }
  return "?";
}

Family family_from_string(std::string_view s) {
  if (s == "qnn") return Family::GeneralQNN;
  if (s == "qmlp") return Family::ImprovedQMLP;
  if (s == "qcnn") return Family::QCNN;
  fail(ErrorKind::Configuration, "unknown family '" + std::string(s) + "' (expected qnn|qmlp|qcnn)");
}

const std::vector<GateKind>& qcnn_dense_sequence() {
  static const std::vector<GateKind> seq{
      GateKind::RZZ, GateKind::RXX, GateKind::RYY, GateKind::RZX, GateKind::RZX,
      GateKind::RXX, GateKind::RZX, GateKind::RZZ, GateKind::RYY, GateKind::RZZ,
      GateKind::RXX, GateKind::RZX, GateKind::RZX, GateKind::RZZ, GateKind::RYY,
  };
  return seq;
}

int trainable_count(const AnsatzSpec& spec) {
  switch (spec.family) {
    case Family::GeneralQNN:
      return 3 * spec.n_qubits * spec.n_layers;
    case Family::ImprovedQMLP:
      return 4 * spec.n_qubits * spec.n_layers;
    case Family::QCNN:
      return build_qcnn(spec).n_trainable;
  }
  return 0;
}

CircuitSpec build_ansatz(const AnsatzSpec& spec) {
  if (spec.family == Family::QCNN) return build_qcnn(spec);
  require(spec.n_qubits >= 2, ErrorKind::Configuration, "ring coupling needs n_qubits >= 2");
  require(spec.n_qubits <= qsim::kMaxQubits, ErrorKind::Capacity, "n_qubits above simulator capacity");
  require(spec.n_layers >= 1, ErrorKind::Configuration, "n_layers must be >= 1");

  const int n = spec.n_qubits;
  CircuitSpec c;
  c.n_qubits = n;
  SlotCounter slots;
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    for (int q = 0; q < n; ++q) add_u3(c, slots, q);
    for (int q = 0; q < n; ++q) {
      const int t = (q + 1) % n;
      if (spec.family == Family::GeneralQNN) {
        c.gates.push_back(GateOp{GateKind::CNOT, {q, t}, {}});
      } else {
        c.gates.push_back(GateOp{GateKind::CRX, {q, t}, {slots.take()}});
      }
    }
  }
  c.n_trainable = slots.next;
  return c;
}

CircuitSpec build_qcnn(const AnsatzSpec& spec) {
  require(spec.n_qubits >= 2, ErrorKind::Configuration, "QCNN needs n_qubits >= 2");
  require(spec.n_qubits <= qsim::kMaxQubits, ErrorKind::Capacity, "n_qubits above simulator capacity");
  require(spec.n_layers >= 1, ErrorKind::Configuration, "n_layers must be >= 1");

  CircuitSpec c;
  c.n_qubits = spec.n_qubits;
  SlotCounter slots;
  std::vector<int> active(static_cast<std::size_t>(spec.n_qubits));
  for (int q = 0; q < spec.n_qubits; ++q) active[static_cast<std::size_t>(q)] = q;

  int stages = spec.qcnn_pool_stages;
  if (stages < 0) {
    stages = 0;
    for (int m = spec.n_qubits; m > 2 && m % 2 == 0; m /= 2) ++stages;
  }

  for (int stage = 0; stage < stages; ++stage) {
    const int m = static_cast<int>(active.size());
    require(m % 2 == 0, ErrorKind::Configuration,
            "QCNN pool stage " + std::to_string(stage) + " has an odd qubit count " + std::to_string(m));
    require(m >= 4, ErrorKind::Configuration, "QCNN pooling would leave fewer than 2 qubits");
    const int pairs = m == 2 ? 1 : m;
    for (int layer = 0; layer < spec.n_layers; ++layer) {
      const Param xx = slots.take();
      const Param yy = slots.take();
      const Param zz = slots.take();
      for (int i = 0; i < pairs; ++i) {
        const int a = active[static_cast<std::size_t>(i)];
        const int b = active[static_cast<std::size_t>((i + 1) % m)];
        c.gates.push_back(GateOp{GateKind::RXX, {a, b}, {xx}});
        c.gates.push_back(GateOp{GateKind::RYY, {a, b}, {yy}});
        c.gates.push_back(GateOp{GateKind::RZZ, {a, b}, {zz}});
      }
    }
    const Param pool = slots.take();
    std::vector<int> kept;
    for (int i = 0; i < m; i += 2) {
      const int retained = active[static_cast<std::size_t>(i)];
      const int discarded = active[static_cast<std::size_t>(i + 1)];
      c.gates.push_back(GateOp{GateKind::CRX, {discarded, retained}, {pool}});
      kept.push_back(retained);
    }
    active = std::move(kept);
  }

  const int m = static_cast<int>(active.size());
  require(m >= 2, ErrorKind::Configuration, "QCNN dense layer needs at least 2 active qubits");
  const auto& seq = qcnn_dense_sequence();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int a = active[i % static_cast<std::size_t>(m)];
    const int b = active[(i + 1) % static_cast<std::size_t>(m)];
    c.gates.push_back(GateOp{seq[i], {a, b}, {slots.take()}});
  }
  c.n_trainable = slots.next;
  if (m < spec.n_qubits) c.active_qubits = active;
  return c;
}

}  // namespace qsph::qnn
