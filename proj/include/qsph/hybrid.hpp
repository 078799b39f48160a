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

// Dense layers and hybrid topologies around one quantum block.
//
// Parameter layout, in order: every front layer (weights row-major, then
// bias), quantum trainables in slot order, every back layer, every parallel
// classical layer, aggregation weights (a1, a2).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsph/qnn.hpp"

namespace qsph::hybrid {

enum class Activation { Tanh, ReLU, Identity };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

double activate(Activation a, double z);
/// Derivative expressed through the pre-activation z and output y.
double activate_deriv(Activation a, double z, double y);

struct DenseShape {
  int rows = 1;  // output width
  int cols = 1;  // input width
  Activation act = Activation::Tanh;

  int n_params() const { return rows * cols + rows; }
};

struct DenseLayer {
  DenseShape shape;
  std::vector<double> weights;  // rows x cols, row-major
  std::vector<double> bias;
};

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);

/// Same as dense_forward with weights and bias taken from a flat span.
void dense_apply(const DenseShape& shape, std::span<const double> wb, std::span<const double> x,
                 std::vector<double>& z, std::vector<double>& y);

enum class Level { SingleCircuit, ForwardHierarchy, CrossedHybrid, ParallelHybrid };

std::string_view to_string(Level l);
Level level_from_string(std::string_view s);

struct HybridModel {
  Level level = Level::SingleCircuit;
  int input_width = 1;
  int output_width = 1;
  std::vector<DenseShape> front;
  qnn::QuantumBlock quantum;
  std::vector<DenseShape> back;
  std::vector<DenseShape> parallel;
  std::uint64_t seed = 0;

  /// Throws a configuration error on a broken dimension chain.
  void validate() const;
};

struct Segment {
  enum class Kind { Front, Quantum, Back, Parallel, Aggregation };
  Kind kind;
  int layer;  // index within its stack, -1 for quantum/aggregation
  std::size_t offset;
  std::size_t size;
};

struct ParamLayout {
  std::vector<Segment> segments;
  std::size_t total = 0;
  std::size_t quantum_offset = 0;
  std::size_t quantum_size = 0;

  bool is_quantum(std::size_t slot) const {
    return slot >= quantum_offset && slot < quantum_offset + quantum_size;
  }
};

ParamLayout parameter_layout(const HybridModel& model);

std::vector<double> model_forward(const HybridModel& model, std::span<const double> x,
                                  std::span<const double> params);

/// Uniform +-sqrt(1/fan_in) for dense weights and biases, [0, 2pi) for quantum
/// angles, (1, 1) for aggregation.
std::vector<double> init_params(const HybridModel& model, std::uint64_t seed);

/// Construction recipe used by the commands.
struct ModelRecipe {
  Level level = Level::CrossedHybrid;
  qnn::Family family = qnn::Family::ImprovedQMLP;
  qnn::HeadKind head = qnn::HeadKind::PauliZ;
  qnn::EncoderKind encoder = qnn::EncoderKind::Angle;
  int n_qubits = 4;
  int n_layers = 2;
  int front_hidden = 16;
  int back_hidden = 8;
  int input_width = 1;
  int output_width = 1;
  /// Angle-encoder bounds for raw inputs when there is no front stack.
  std::vector<double> input_lower;
  std::vector<double> input_upper;
};

HybridModel build_model(const ModelRecipe& recipe);

nlohmann::json to_json(const HybridModel& model, std::span<const double> params);
/// Returns the model and fills params when the document carries them.
HybridModel model_from_json(const nlohmann::json& j, std::vector<double>* params);

}  // namespace qsph::hybrid
