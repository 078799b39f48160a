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

#include <cmath>
#include <string>

#include "qsph/error.hpp"
#include "qsph/hybrid.hpp"

namespace qsph::hybrid {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::ReLU:
      return "relu";
    case Activation::Identity:
      return "identity";
  }
  return "?";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::ReLU;
  if (s == "identity") return Activation::Identity;
  fail(ErrorKind::Configuration, "unknown activation '" + std::string(s) + "'");
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::ReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::Identity:
      return z;
  }
  return z;
}

double activate_deriv(Activation a, double z, double y) {
  switch (a) {
    case Activation::Tanh:
      return 1.0 - y * y;
    case Activation::ReLU:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::Identity:
      return 1.0;
  }
  return 1.0;
}

void dense_apply(const DenseShape& shape, std::span<const double> wb, std::span<const double> x,
                 std::vector<double>& z, std::vector<double>& y) {
  require(static_cast<int>(x.size()) == shape.cols, ErrorKind::Shape,
          "dense layer expects " + std::to_string(shape.cols) + " inputs, got " + std::to_string(x.size()));
  const auto rows = static_cast<std::size_t>(shape.rows);
  const auto cols = static_cast<std::size_t>(shape.cols);
  z.assign(rows, 0.0);
  y.assign(rows, 0.0);
  const double* w = wb.data();
  const double* b = wb.data() + rows * cols;
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    z[r] = acc;
    y[r] = activate(shape.act, acc);
  }
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
  const auto& s = layer.shape;
  require(static_cast<int>(layer.weights.size()) == s.rows * s.cols && static_cast<int>(layer.bias.size()) == s.rows,
          ErrorKind::Shape, "dense layer storage does not match its shape");
  std::vector<double> wb = layer.weights;
  wb.insert(wb.end(), layer.bias.begin(), layer.bias.end());
  std::vector<double> z, y;
  dense_apply(s, wb, x, z, y);
  return y;
}

}  // namespace qsph::hybrid
