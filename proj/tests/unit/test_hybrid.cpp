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


#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "../common/check.hpp"
#include "../common/oracles.hpp"
#include "qsph/hybrid.hpp"

using namespace qsph;
using namespace qsph::hybrid;

namespace {

qnn::QuantumBlock qmlp_block(int features, int qubits, int layers) {
  qnn::EncoderSpec e;
  e.n_features = features;
  e.lower.assign(static_cast<std::size_t>(features), -1.0);
  e.upper.assign(static_cast<std::size_t>(features), 1.0);
  return qnn::make_block(e, {qnn::Family::ImprovedQMLP, qubits, layers}, qnn::HeadKind::PauliZ, -1, false);
}

void put_identity(std::vector<double>& p, std::size_t off, int n) {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) p[off + static_cast<std::size_t>(r * n + c)] = r == c ? 1.0 : 0.0;
  for (int r = 0; r < n; ++r) p[off + static_cast<std::size_t>(n * n + r)] = 0.0;
}

}  // namespace

TEST_SUITE("hybrid") {
  TEST_CASE("dense forward examples") {
    DenseLayer id{{2, 2, Activation::Identity}, {1, 0, 0, 1}, {0, 0}};
    CHECK(dense_forward(id, std::vector<double>{0.3, -2.0}) == std::vector<double>{0.3, -2.0});
    DenseLayer cst{{2, 3, Activation::Identity}, std::vector<double>(6, 0.0), {1.5, -0.25}};
    CHECK(dense_forward(cst, std::vector<double>{4, 5, 6}) == std::vector<double>{1.5, -0.25});
    DenseLayer t{{1, 2, Activation::Tanh}, {1, 1}, {0}};
    CHECK(dense_forward(t, std::vector<double>{0.5, 0.5})[0] == doctest::Approx(0.76159).epsilon(1e-5));
    CHECK(dense_forward(t, std::vector<double>{0.5, 0.5})[0] == std::tanh(1.0));
    CHECK_KIND(dense_forward(t, std::vector<double>{1, 2, 3}), ErrorKind::Shape);
  }

  TEST_CASE("identity activation is affine") {
    std::mt19937_64 rng(2);
    DenseLayer l{{3, 4, Activation::Identity}, {}, {}};
    for (int k = 0; k < 12; ++k) l.weights.push_back(uniform(rng, -1, 1));
    for (int k = 0; k < 3; ++k) l.bias.push_back(uniform(rng, -1, 1));
    const std::vector<double> x{0.5, -1.0, 2.0, 0.25};
    const std::vector<double> zero(4, 0.0);
    for (double a : {2.0, -0.5, 4.0}) {
      std::vector<double> ax;
      for (double v : x) ax.push_back(a * v);
      const auto fa = dense_forward(l, ax), fx = dense_forward(l, x), f0 = dense_forward(l, zero);
      for (int r = 0; r < 3; ++r) CHECK(fa[r] - f0[r] == doctest::Approx(a * (fx[r] - f0[r])).epsilon(1e-14));
    }
  }

  TEST_CASE("single circuit on an identity circuit reads all ones") {
    HybridModel m;
    m.level = Level::SingleCircuit;
    qnn::EncoderSpec e;
    e.n_features = 4;
    m.quantum = qnn::make_block(e, {qnn::Family::GeneralQNN, 4, 1}, qnn::HeadKind::PauliZ, -1, false);
    m.input_width = 4;
    m.output_width = 4;
    m.validate();
    const std::vector<double> p(parameter_layout(m).total, 0.0);
    for (double v : model_forward(m, std::vector<double>(4, 0.0), p)) CHECK(std::abs(v - 1.0) < 1e-15);
  }

  TEST_CASE("crossed with identity layers equals single circuit") {
    std::mt19937_64 rng(12);
    const auto block = qmlp_block(3, 3, 2);
    HybridModel single;
    single.level = Level::SingleCircuit;
    single.input_width = 3;
    single.output_width = 3;
    single.quantum = block;
    HybridModel crossed = single;
    crossed.level = Level::CrossedHybrid;
    crossed.front = {DenseShape{3, 3, Activation::Identity}};
    crossed.back = {DenseShape{3, 3, Activation::Identity}};
    crossed.validate();
    const auto lay = parameter_layout(crossed);
    for (int trial = 0; trial < 20; ++trial) {
      const auto th = oracle::random_angles(lay.quantum_size, rng);
      std::vector<double> p(lay.total, 0.0);
      put_identity(p, 0, 3);
      put_identity(p, lay.quantum_offset + lay.quantum_size, 3);
      std::copy(th.begin(), th.end(), p.begin() + static_cast<std::ptrdiff_t>(lay.quantum_offset));
      const std::vector<double> x{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
      const auto a = model_forward(crossed, x, p);
      const auto b = model_forward(single, x, th);
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
    }
  }

  TEST_CASE("parallel aggregation") {
    ModelRecipe r;
    r.level = Level::ParallelHybrid;
    r.input_width = 2;
    r.output_width = 1;
    r.n_qubits = 2;
    r.input_lower = {-1, -1};
    r.input_upper = {1, 1};
    const auto m = build_model(r);
    auto p = init_params(m, 5);
    const std::size_t a1 = p.size() - 2, a2 = p.size() - 1;
    const std::vector<double> x{0.2, -0.7};

    // Pure classical branch evaluated by hand.
    const auto lay = parameter_layout(m);
    std::vector<double> cls = x;
    for (const auto& s : lay.segments) {
      if (s.kind != Segment::Kind::Parallel) continue;
      const auto& shape = m.parallel[static_cast<std::size_t>(s.layer)];
      DenseLayer l{shape, {}, {}};
      l.weights.assign(p.begin() + static_cast<std::ptrdiff_t>(s.offset),
                       p.begin() + static_cast<std::ptrdiff_t>(s.offset + static_cast<std::size_t>(shape.rows * shape.cols)));
      l.bias.assign(p.begin() + static_cast<std::ptrdiff_t>(s.offset + static_cast<std::size_t>(shape.rows * shape.cols)),
                    p.begin() + static_cast<std::ptrdiff_t>(s.offset + s.size));
      cls = dense_forward(l, cls);
    }
    p[a1] = 1.0;
    p[a2] = 0.0;
    CHECK(model_forward(m, x, p)[0] == doctest::Approx(cls[0]).epsilon(1e-15));

    // y(a) - y(0) is linear in a.
    auto at = [&](double u, double v) {
      p[a1] = u;
      p[a2] = v;
      return model_forward(m, x, p)[0];
    };
    const double y0 = at(0, 0);
    const double ya = at(0.3, -1.1), yb = at(2.0, 0.4), yab = at(2.3, -0.7);
    CHECK(std::abs((yab - y0) - ((ya - y0) + (yb - y0))) < 1e-14);
    CHECK(std::abs((at(0.6, -2.2) - y0) - 2.0 * (ya - y0)) < 1e-14);
  }

  TEST_CASE("parameter layout examples") {
    HybridModel s;
    s.level = Level::SingleCircuit;
    s.input_width = 4;
    s.output_width = 4;
    s.quantum = qmlp_block(4, 4, 1);
    CHECK(parameter_layout(s).total == 16);

    HybridModel c;
    c.level = Level::CrossedHybrid;
    c.input_width = 2;
    c.output_width = 1;
    c.front = {DenseShape{8, 2, Activation::Identity}};
    c.quantum = qmlp_block(8, 4, 1);
    c.back = {DenseShape{1, 4, Activation::Identity}};
    c.validate();
    const auto lay = parameter_layout(c);
    CHECK(lay.total == 45);
    CHECK(lay.quantum_offset == 24);
    CHECK(lay.quantum_size == 16);

    std::mt19937_64 rng(1);
    std::vector<double> p(45);
    for (auto& v : p) v = uniform(rng, -1, 1);
    std::vector<double> back_p;
    const auto back = model_from_json(to_json(c, p), &back_p);
    CHECK(back_p == p);
    const auto lay2 = parameter_layout(back);
    CHECK(lay2.total == lay.total);
    CHECK(lay2.quantum_offset == lay.quantum_offset);
    CHECK(lay2.segments.size() == lay.segments.size());
    const std::vector<double> x{0.1, 0.9};
    CHECK(model_forward(back, x, back_p) == model_forward(c, x, p));
  }

  TEST_CASE("broken dimension chains") {
    HybridModel c;
    c.level = Level::CrossedHybrid;
    c.input_width = 2;
    c.output_width = 1;
    c.front = {DenseShape{5, 2, Activation::Tanh}};
    c.quantum = qmlp_block(8, 4, 1);
    c.back = {DenseShape{1, 4, Activation::Identity}};
    CHECK_KIND(c.validate(), ErrorKind::Configuration);
    c.front = {DenseShape{8, 2, Activation::Tanh}};
    c.validate();
    c.back.clear();
    CHECK_KIND(c.validate(), ErrorKind::Configuration);
    const std::vector<double> p(45, 0.0);
    c.back = {DenseShape{1, 4, Activation::Identity}};
    CHECK_KIND(model_forward(c, std::vector<double>{0.1, 0.2}, std::vector<double>(44, 0.0)), ErrorKind::Configuration);
    CHECK_KIND(model_forward(c, std::vector<double>{0.1}, p), ErrorKind::Configuration);
  }

  TEST_CASE("random configurations: width, determinism, init ranges") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      const auto r = oracle::random_recipe(rng, false);
      const auto m = build_model(r);
      const auto p = init_params(m, rng());
      const auto lay = parameter_layout(m);
      CHECK(p.size() == lay.total);
      for (std::size_t k = 0; k < lay.quantum_size; ++k) {
        const double a = p[lay.quantum_offset + k];
        CHECK((a >= 0.0 && a < 2.0 * std::numbers::pi));
      }
      std::vector<double> x(static_cast<std::size_t>(r.input_width));
      for (auto& v : x) v = uniform(rng, -1, 1);
      const auto y1 = model_forward(m, x, p);
      const auto y2 = model_forward(m, x, p);
      CHECK(y1.size() == static_cast<std::size_t>(r.output_width));
      CHECK(y1 == y2);
    }
  }

  TEST_CASE("activations") {
    CHECK(activate(Activation::ReLU, -1.0) == 0.0);
    CHECK(activate(Activation::ReLU, 2.0) == 2.0);
    CHECK(activate(Activation::Identity, -3.5) == -3.5);
    const double z = 0.4;
    CHECK(activate_deriv(Activation::Tanh, z, std::tanh(z)) == doctest::Approx(1.0 - std::tanh(z) * std::tanh(z)));
    CHECK_KIND(activation_from_string("gelu"), ErrorKind::Configuration);
    CHECK_KIND(level_from_string("deep"), ErrorKind::Configuration);
  }
}
