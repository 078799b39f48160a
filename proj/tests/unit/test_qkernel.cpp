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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "../common/check.hpp"
#include "../common/oracles.hpp"
#include "qsph/app.hpp"
#include "qsph/qkernel.hpp"

using namespace qsph;
using namespace qsph::qkernel;
using sph::Mat2;
using sph::ParticleSet;

namespace {

struct ZeroKernel final : PairKernel {
  double value(Vec2, double) const override { return 0.0; }
  Vec2 gradient(Vec2, double) const override { return {}; }
  nlohmann::json to_json() const override { return {{"kind", "zero"}}; }
};

ParticleSet random_cloud(std::size_t n, double h, std::mt19937_64& rng) {
  ParticleSet ps;
  ps.h = h;
  ps.spacing = h;
  for (std::size_t i = 0; i < n; ++i) {
    ps.pos.push_back({uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)});
    ps.volume.push_back(uniform(rng, 5e-4, 2e-3));
    ps.value.push_back(uniform(rng, -1.0, 1.0));
    ps.interior.push_back(1);
  }
  return ps;
}

ParticleSet lattice(double dd, double h_ratio) {
  sph::LatticeSpec s;
  s.spacing = dd;
  s.h_ratio = h_ratio;
  return sph::make_lattice(s);
}

FittedModel small_model(int in, int out, std::uint64_t seed) {
  hybrid::ModelRecipe r;
  r.level = hybrid::Level::CrossedHybrid;
  r.n_qubits = 2;
  r.n_layers = 1;
  r.input_width = in;
  r.output_width = out;
  FittedModel m;
  m.model = hybrid::build_model(r);
  m.params = hybrid::init_params(m.model, seed);
  m.output_scale = 0.5;
  return m;
}

}  // namespace

TEST_SUITE("qkernel") {

TEST_CASE("classical kernel reproduces the SPH sums") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double h = uniform(rng, 0.03, 0.08);
    auto ps = random_cloud(300, h, rng);
    const sph::KernelSpec k{h, 2};
    const auto nl = sph::build_neighbors(ps, k.support());
    const ClassicalKernel ck(k);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      CHECK(std::abs(quantum_sph_value(ck, ps, nl, i) - sph::sph_value(ps, k, nl, i)) < 1e-12);
      const Vec2 a = quantum_sph_gradient(ck, ps, nl, i);
      const Vec2 b = sph::sph_gradient(ps, k, nl, i);
      CHECK((a - b).norm() < 1e-12 * std::max(1.0, b.norm()));
    }
  }
}

TEST_CASE("per-particle correction matches the corrected operator") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    auto ps = oracle::irregular_patch(0.05, 0.3, rng);
    for (std::size_t i = 0; i < ps.size(); ++i) ps.value[i] = std::sin(3.0 * ps.pos[i].x) + ps.pos[i].y * ps.pos[i].y;
    const sph::KernelSpec k{ps.h, 2};
    const auto nl = sph::build_neighbors(ps, k.support());
    const auto corr = sph::correction_matrices(ps, k, nl);
    const ClassicalKernel ck(k, corr[0].Linv);
    const Vec2 a = quantum_sph_gradient(ck, ps, nl, 0);
    const Vec2 b = sph::corrected_gradient(ps, k, nl, corr, 0);
    CHECK((a - b).norm() < 1e-12 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("kernel stencil equals the classical stencil") {
  auto ps = lattice(0.05, 1.2);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const auto a = kernel_stencil(ClassicalKernel(k), ps, nl);
  const auto b = sph::classical_stencil(ps, k, nl, false);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    REQUIRE(a.rows[i].size() == b.rows[i].size());
    for (std::size_t n = 0; n < a.rows[i].size(); ++n) {
      CHECK(a.rows[i][n].first == b.rows[i][n].first);
      CHECK((a.rows[i][n].second - b.rows[i][n].second).norm() < 1e-12);
    }
  }
}

TEST_CASE("classical kernel gradient is zero at the origin and past the support") {
  const sph::KernelSpec k{0.1, 2};
  const ClassicalKernel ck(k);
  CHECK(ck.gradient({0.0, 0.0}, 1.0).norm() == 0.0);
  CHECK(ck.value({0.2, 0.0}, 1.0) == 0.0);
  CHECK(ck.value({0.0, 0.25}, 1.0) == 0.0);
  CHECK(ck.gradient({0.2, 0.0}, 1.0).norm() == 0.0);
  CHECK(ck.value({0.0, 0.0}, 2.0) == doctest::Approx(sph::quintic_w(0.0, k) * 2.0).epsilon(1e-14));
}

TEST_CASE("dataset at the support edge") {
  ParticleSet ps;
  ps.h = 0.1;
  ps.spacing = 0.1;
  ps.pos = {{0.0, 0.0}, {0.2, 0.0}};
  ps.volume = {0.01, 0.01};
  ps.value = {0.0, 0.0};
  ps.interior = {1, 0};
  const sph::KernelSpec k{0.1, 2};
  const auto nl = sph::build_neighbors(ps, 0.2 * (1.0 + 1e-9));
  const auto d = generate_kernel_dataset(ps, k, nl, false);
  REQUIRE(d.samples.size() == 2);
  const auto& s = d.samples[1];
  CHECK(s.r.norm() == doctest::Approx(0.2));
  CHECK(s.value_target == 0.0);
  CHECK(s.grad_target.norm() == 0.0);
}

TEST_CASE("dataset target at q = 0.7") {
  const double dd = 0.05;
  auto ps = lattice(dd, 1.0 / 0.7);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const auto d = generate_kernel_dataset(ps, k, nl, false);
  const double expect = sph::quintic_w(0.7, k) * dd * dd;
  int found = 0;
  for (const auto& s : d.samples) {
    if (std::abs(s.r.norm() - dd) < 1e-12) {
      CHECK(s.value_target == doctest::Approx(expect).epsilon(1e-10));
      ++found;
    }
  }
  CHECK(found == 4);
}

TEST_CASE("dataset dedupe and self sample") {
  auto ps = lattice(0.04, 1.2);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const auto d = generate_kernel_dataset(ps, k, nl, true);
  CHECK(d.samples.size() == 21);
  CHECK(d.corrected);
  CHECK(d.dv_max == doctest::Approx(0.04 * 0.04));
  const auto self = std::count_if(d.samples.begin(), d.samples.end(), [](const PairSample& s) { return s.r.norm() == 0.0; });
  CHECK(self == 1);
  CHECK(value_training_set(d, value_scale(d)).size() == 21);
  CHECK(grad_training_set(d, PreMap::Identity, grad_scale(d, PreMap::Identity)).size() == 20);
  const auto g = grad_training_set(d, PreMap::NormDistance, grad_scale(d, PreMap::NormDistance));
  CHECK(g.size() == 20);
  CHECK(g.in_width == 2);
  CHECK(g.out_width == 1);
  double m = 0.0;
  for (double y : g.y) m = std::max(m, std::abs(y));
  CHECK(m == doctest::Approx(1.0));
}

TEST_CASE("corrected and plain targets agree on a lattice") {
  auto ps = lattice(0.04, 1.2);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const auto plain = generate_kernel_dataset(ps, k, nl, false);
  const auto corr = generate_kernel_dataset(ps, k, nl, true);
  REQUIRE(plain.samples.size() == corr.samples.size());
  const double gmax = grad_scale(plain, PreMap::Identity);
  for (std::size_t n = 0; n < plain.samples.size(); ++n) {
    CHECK(plain.samples[n].value_target == corr.samples[n].value_target);
    CHECK((plain.samples[n].grad_target - corr.samples[n].grad_target).norm() < 0.05 * gmax);
  }
}

TEST_CASE("empty datasets are rejected") {
  auto ps = lattice(0.1, 1.2);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  auto none = ps;
  std::fill(none.interior.begin(), none.interior.end(), 0);
  CHECK_KIND(generate_kernel_dataset(none, k, nl, false), ErrorKind::EmptyDataset);
  auto dry = ps;
  std::fill(dry.volume.begin(), dry.volume.end(), 0.0);
  CHECK_KIND(generate_kernel_dataset(dry, k, nl, false), ErrorKind::EmptyDataset);
  CHECK_KIND(fit_kernel(KernelDataset{}, KernelFitConfig{}), ErrorKind::EmptyDataset);
}

TEST_CASE("zero kernel and constant fields") {
  std::mt19937_64 rng(23);
  auto ps = random_cloud(200, 0.06, rng);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const ZeroKernel z;
  const LearnedKernel empty(ps.h, 1e-3, PreMap::Identity, FittedModel{}, FittedModel{});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(quantum_sph_value(z, ps, nl, i) == 0.0);
    CHECK(quantum_sph_gradient(z, ps, nl, i).norm() == 0.0);
    CHECK(quantum_sph_value(empty, ps, nl, i) == 0.0);
    CHECK(quantum_sph_gradient(empty, ps, nl, i).norm() == 0.0);
  }
  std::fill(ps.value.begin(), ps.value.end(), 2.5);
  const ClassicalKernel ck(k);
  for (std::size_t i = 0; i < ps.size(); ++i) CHECK(quantum_sph_gradient(ck, ps, nl, i).norm() == 0.0);
}

TEST_CASE("momentum right-hand side") {
  auto ps = lattice(0.04, 1.2);
  const sph::KernelSpec k{ps.h, 2};
  const auto nl = sph::build_neighbors(ps, k.support());
  const ClassicalKernel plain(k);
  const auto force = [](std::size_t i) { return Vec2{0.1 * static_cast<double>(i), -1.0}; };

  std::vector<Vec2> uniform_v(ps.size(), Vec2{0.3, -0.7});
  for (std::size_t i = 0; i < ps.size(); i += 17) {
    const Vec2 a = quantum_momentum_rhs(plain, ps, nl, uniform_v, force, i);
    CHECK((a - force(i)).norm() == 0.0);
  }
  CHECK_KIND(quantum_momentum_rhs(plain, ps, nl, std::vector<Vec2>(3), force, 0), ErrorKind::Shape);

  // Componentwise divergence terms against the corrected operator.
  const auto corr = sph::correction_matrices(ps, k, nl);
  std::size_t mid = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.interior[i] && (ps.pos[i] - Vec2{0.5, 0.5}).norm() < (ps.pos[mid] - Vec2{0.5, 0.5}).norm()) mid = i;
  }
  const ClassicalKernel lk(k, corr[mid].Linv);
  std::vector<Vec2> v(ps.size());
  auto vx = ps, vy = ps;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    v[i] = {std::sin(2.0 * ps.pos[i].x), std::cos(3.0 * ps.pos[i].y)};
    vx.value[i] = v[i].x;
    vy.value[i] = v[i].y;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps.interior[i]) continue;
    const Vec2 a = quantum_momentum_rhs(lk, ps, nl, v, nullptr, i);
    const Vec2 b{sph::corrected_gradient(vx, k, nl, corr, i).x, sph::corrected_gradient(vy, k, nl, corr, i).y};
    num += (a - b).dot(a - b);
    den += b.dot(b);
  }
  CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("learned kernel clamps and counts") {
  const double h = 0.05, dv = 0.0025;
  LearnedKernel lk(h, dv, PreMap::Identity, small_model(2, 1, 3), small_model(3, 2, 4));
  for (int n = 0; n <= 20; ++n) {
    const double r = 2.0 * h * n / 20.0;
    (void)lk.value({r, 0.0}, dv);
    (void)lk.gradient({-r, 0.0}, 0.5 * dv);
    (void)lk.gradient({0.0, r}, dv);
  }
  CHECK(lk.clamp_count() == 0);
  const double inside = lk.value({2.0 * h, 0.0}, dv);
  CHECK(lk.value({3.0 * h, 0.0}, dv) == inside);
  CHECK(lk.clamp_count() == 1);
  (void)lk.gradient({3.0 * h, -3.0 * h}, 2.0 * dv);
  CHECK(lk.clamp_count() == 4);
  lk.reset_clamp_count();
  CHECK(lk.clamp_count() == 0);

  LearnedKernel radial(h, dv, PreMap::NormDistance, FittedModel{}, small_model(2, 1, 5));
  const Vec2 g = radial.gradient({0.03, 0.04}, dv);
  CHECK(std::abs(g.x * 0.04 - g.y * 0.03) < 1e-15);
  CHECK(radial.gradient({0.0, 0.0}, dv).norm() == 0.0);

  CHECK_KIND(LearnedKernel(h, dv, PreMap::NormDistance, FittedModel{}, small_model(3, 2, 6)), ErrorKind::Configuration);
  CHECK_KIND(LearnedKernel(0.0, dv, PreMap::Identity, FittedModel{}, FittedModel{}), ErrorKind::Configuration);
}

TEST_CASE("kernel JSON round trip") {
  const double h = 0.05, dv = 0.0025;
  for (PreMap eta : {PreMap::Identity, PreMap::NormDistance, PreMap::InnerDistance}) {
    const int in = eta == PreMap::Identity ? 3 : 2;
    const int out = eta == PreMap::Identity ? 2 : 1;
    const LearnedKernel lk(h, dv, eta, small_model(2, 1, 7), small_model(in, out, 8));
    const auto back = kernel_from_json(nlohmann::json::parse(lk.to_json().dump()));
    for (int n = 0; n < 10; ++n) {
      const Vec2 r{0.01 * n, -0.007 * n};
      CHECK(back->value(r, dv) == lk.value(r, dv));
      CHECK(back->gradient(r, dv).x == lk.gradient(r, dv).x);
      CHECK(back->gradient(r, dv).y == lk.gradient(r, dv).y);
    }
  }
  const sph::KernelSpec k{0.07, 2};
  const ClassicalKernel ck(k, Mat2{1.1, 0.2, -0.1, 0.9});
  const auto cb = kernel_from_json(ck.to_json());
  CHECK(cb->gradient({0.03, 0.02}, 1.0).x == ck.gradient({0.03, 0.02}, 1.0).x);
  CHECK(cb->gradient({0.03, 0.02}, 1.0).y == ck.gradient({0.03, 0.02}, 1.0).y);
  CHECK_KIND(kernel_from_json(nlohmann::json{{"kind", "mystery"}}), ErrorKind::Configuration);
  CHECK(premap_from_string(to_string(PreMap::InnerDistance)) == PreMap::InnerDistance);
  CHECK_KIND(premap_from_string("cubic"), ErrorKind::Configuration);
}

TEST_CASE("kernel space extraction") {
  const sph::KernelSpec k{0.05, 2};
  const ClassicalKernel ck(k);
  const LearnedKernel lk(k.h, 0.0025, PreMap::Identity, small_model(2, 1, 9), small_model(3, 2, 10));
  const auto grid = app::radius_grid(k.h, 51);
  for (Component c : {Component::Value, Component::GradX, Component::GradY}) {
    const auto rows = extract_kernel_space(lk, ck, grid, 0.0025, c);
    REQUIRE(rows.size() == grid.size());
    CHECK(rows.front().r == 0.0);
    CHECK(rows.back().r == doctest::Approx(2.0 * k.h));
    CHECK(rows.back().classical == 0.0);
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (n > 0) CHECK(rows[n].r > rows[n - 1].r);
      CHECK(rows[n].residual == rows[n].learned - rows[n].classical);
    }
  }
  const auto self = extract_kernel_space(ck, ck, grid, 0.0025, Component::GradY);
  for (const auto& row : self) CHECK(row.residual == 0.0);

  const auto path = std::filesystem::temp_directory_path() / "qsph_kernel_space.csv";
  write_kernel_space_csv(path.string(), self);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,learned,classical,residual");
  int lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 51);
  std::filesystem::remove(path);
}

TEST_CASE("short value fit reduces the loss") {
  app::KernelTaskSpec spec;
  const auto task = app::make_kernel_task(spec);
  KernelFitConfig cfg;
  cfg.recipe.level = hybrid::Level::CrossedHybrid;
  cfg.lr = 0.01;
  cfg.epochs = 150;
  cfg.seed = 1;
  cfg.fit_grad = false;
  const auto fit = fit_kernel(task.dataset, cfg);
  REQUIRE(fit.value_trace.size() == 150);
  CHECK(fit.grad_trace.empty());
  CHECK(fit.value_trace.back().train_loss < 0.01 * fit.value_trace.front().train_loss);
  CHECK(fit.kernel->gradient({0.01, 0.0}, 0.0016).norm() == 0.0);
  fit.kernel->reset_clamp_count();
  for (const auto& s : task.dataset.samples) (void)fit.kernel->value(s.r, s.dV);
  CHECK(fit.kernel->clamp_count() == 0);

  const auto again = fit_kernel(task.dataset, cfg);
  CHECK(again.kernel->value({0.02, 0.01}, 0.0016) == fit.kernel->value({0.02, 0.01}, 0.0016));
}

}  // TEST_SUITE
