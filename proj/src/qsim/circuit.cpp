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
#include <numeric>
#include <string>

#include "qsph/error.hpp"
#include "qsph/qsim.hpp"

namespace qsph::qsim {

using nlohmann::json;

std::vector<int> CircuitSpec::readable_qubits() const {
  if (!active_qubits.empty()) return active_qubits;
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

void CircuitSpec::validate() const {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::Capacity,
          "circuit n_qubits out of range: " + std::to_string(n_qubits));
  require(n_trainable >= 0 && n_encoded >= 0, ErrorKind::Configuration,
          "negative parameter counts");
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const GateOp& op = gates[g];
    const std::string where = "gate " + std::to_string(g) + " (" + std::string(to_string(op.kind)) + ")";
    require(static_cast<int>(op.targets.size()) == gate_width(op.kind), ErrorKind::Configuration,
            where + ": wrong number of targets");
    for (int t : op.targets) {
      require(t >= 0 && t < n_qubits, ErrorKind::Configuration, where + ": target out of range");
    }
    if (op.targets.size() == 2) {
      require(op.targets[0] != op.targets[1], ErrorKind::Configuration, where + ": repeated target");
    }
    require(static_cast<int>(op.params.size()) == gate_arity(op.kind), ErrorKind::Configuration,
            where + ": wrong number of angles");
    for (const Param& p : op.params) {
      if (p.is_slot()) {
        require(p.slot < n_params(), ErrorKind::Configuration, where + ": slot out of bounds");
      }
    }
  }
  for (int q : active_qubits) {
    require(q >= 0 && q < n_qubits, ErrorKind::Configuration, "active qubit out of range");
  }
}

std::vector<double> join_params(const CircuitSpec& circuit, std::span<const double> trainable,
                                std::span<const double> encoded) {
  require(static_cast<int>(trainable.size()) == circuit.n_trainable, ErrorKind::Configuration,
          "expected " + std::to_string(circuit.n_trainable) + " trainable parameters, got " +
              std::to_string(trainable.size()));
  require(static_cast<int>(encoded.size()) == circuit.n_encoded, ErrorKind::Configuration,
          "expected " + std::to_string(circuit.n_encoded) + " encoded parameters, got " +
              std::to_string(encoded.size()));
  std::vector<double> params(trainable.begin(), trainable.end());
  params.insert(params.end(), encoded.begin(), encoded.end());
  return params;
}

void apply_circuit(StateVector& state, const CircuitSpec& circuit, std::span<const double> params) {
  require(state.n_qubits() == circuit.n_qubits, ErrorKind::Shape,
          "state and circuit qubit counts differ");
  for (const GateOp& op : circuit.gates) {
    const auto angles = resolve_angles(op, params);
    apply_gate(state, op, angles);
  }
}

StateVector run_circuit(const CircuitSpec& circuit, std::span<const double> trainable,
                        std::span<const double> encoded) {
  const auto params = join_params(circuit, trainable, encoded);
  StateVector state(circuit.n_qubits);
  apply_circuit(state, circuit, params);
  return state;
}

json to_json(const CircuitSpec& circuit) {
  json gates = json::array();
  for (const GateOp& op : circuit.gates) {
    json g;
    g["kind"] = std::string(to_string(op.kind));
    g["targets"] = op.targets;
    const bool all_slots =
        std::all_of(op.params.begin(), op.params.end(), [](const Param& p) { return p.is_slot(); });
    if (!op.params.empty() && all_slots) {
      std::vector<int> slots;
      for (const Param& p : op.params) slots.push_back(p.slot);
      g["slots"] = slots;
    } else if (!op.params.empty()) {
      // Mixed gates keep positions aligned: -1 in "slots" marks a literal.
      std::vector<int> slots;
      std::vector<double> literals;
      for (const Param& p : op.params) {
        slots.push_back(p.slot);
        literals.push_back(p.is_slot() ? 0.0 : p.literal);
      }
      g["literals"] = literals;
      if (std::any_of(op.params.begin(), op.params.end(), [](const Param& p) { return p.is_slot(); })) {
        g["slots"] = slots;
      }
    }
    gates.push_back(std::move(g));
  }
  json j;
  j["n_qubits"] = circuit.n_qubits;
  j["n_trainable"] = circuit.n_trainable;
  j["n_encoded"] = circuit.n_encoded;
  j["gates"] = std::move(gates);
  if (!circuit.active_qubits.empty()) j["active_qubits"] = circuit.active_qubits;
  return j;
}

CircuitSpec circuit_from_json(const json& j) {
  CircuitSpec c;
  try {
    c.n_qubits = j.at("n_qubits").get<int>();
    c.n_trainable = j.value("n_trainable", 0);
    c.n_encoded = j.value("n_encoded", 0);
    if (j.contains("active_qubits")) c.active_qubits = j.at("active_qubits").get<std::vector<int>>();
    for (const auto& g : j.at("gates")) {
      GateOp op;
      op.kind = gate_kind_from_string(g.at("kind").get<std::string>());
      op.targets = g.at("targets").get<std::vector<int>>();
      const bool has_slots = g.contains("slots");
      const bool has_literals = g.contains("literals");
      if (has_slots && has_literals) {
        const auto slots = g.at("slots").get<std::vector<int>>();
        const auto lits = g.at("literals").get<std::vector<double>>();
        require(slots.size() == lits.size(), ErrorKind::Configuration,
                "gate slots/literals length mismatch");
        for (std::size_t k = 0; k < slots.size(); ++k) {
          op.params.push_back(slots[k] >= 0 ? Param::from_slot(slots[k]) : Param::from_literal(lits[k]));
        }
      } else if (has_slots) {
        for (int s : g.at("slots").get<std::vector<int>>()) {
          require(s >= 0, ErrorKind::Configuration, "negative slot index");
          op.params.push_back(Param::from_slot(s));
        }
      } else if (has_literals) {
        for (double v : g.at("literals").get<std::vector<double>>()) op.params.push_back(Param::from_literal(v));
      }
      c.gates.push_back(std::move(op));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Configuration, std::string("malformed circuit JSON: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace qsph::qsim
