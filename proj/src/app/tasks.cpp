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
#include <cmath>

#include "qsph/app.hpp"
#include "qsph/error.hpp"

namespace qsph::app {

namespace {
constexpr std::size_t kStencil = 21;
}

FieldTask make_field_task(const FieldTaskSpec& spec) {
  require(spec.n >= 4, ErrorKind::Configuration, "field lattice needs n >= 4");
  FieldTask task;
  task.spec = spec;
  sph::LatticeSpec ls;
  ls.spacing = 1.0 / (spec.n - 1);
  ls.ghost_layers = spec.ghost_layers;
  ls.h_ratio = spec.h_ratio;
  task.ps = sph::make_lattice(ls);
  const auto field = bench::VortexFieldSpec::defaults(spec.phase_seed);
  for (std::size_t i = 0; i < task.ps.size(); ++i) {
    task.ps.value[i] = bench::total_field(field, task.ps.pos[i].x, task.ps.pos[i].y, spec.t);
  }
  task.kernel = sph::KernelSpec{task.ps.h, 2};
  task.nl = sph::build_neighbors(task.ps, task.kernel.support());

  task.data.in_width = static_cast<int>(kStencil);
  task.data.out_width = 1;
  std::vector<double> x(kStencil);
  for (std::size_t i = 0; i < task.ps.size(); ++i) {
    if (!task.ps.interior[i]) continue;
    const auto& nbs = task.nl.lists[i];
    require(nbs.size() + 1 == kStencil, ErrorKind::Configuration,
            "field stencil must hold 20 neighbours; use h_ratio 1.2 and >= 3 ghost layers");
    x[0] = task.ps.value[i];
    for (std::size_t k = 0; k < nbs.size(); ++k) x[k + 1] = task.ps.value[nbs[k].j];
    const double y = sph::sph_value(task.ps, task.kernel, task.nl, i);
    task.data.push(x, std::span<const double>(&y, 1));
    task.rows.push_back(i);
  }
  return task;
}

hybrid::ModelRecipe field_recipe(hybrid::Level level, qnn::Family family, qnn::HeadKind head) {
  hybrid::ModelRecipe r;
  r.level = level;
  r.family = family;
  r.head = head;
  r.input_width = static_cast<int>(kStencil);
  r.output_width = 1;
  r.input_lower.assign(kStencil, -1.0);
  r.input_upper.assign(kStencil, 1.0);
  return r;
}

FitResult fit_dataset(const train::Dataset& data, const FitSpec& spec) {
  require(spec.epochs >= 0, ErrorKind::Configuration, "epochs must be >= 0");
  require(spec.batch_size > 0, ErrorKind::Configuration, "batch size must be positive");
  require(spec.lr > 0.0, ErrorKind::Configuration, "learning rate must be positive");
  auto recipe = spec.recipe;
  recipe.input_width = data.in_width;
  recipe.output_width = data.out_width;
  FitResult res;
  res.model = hybrid::build_model(recipe);
  res.model.seed = spec.seed;
  const auto split = train::split_dataset(data, spec.train_frac, spec.seed + 1);
  auto params = hybrid::init_params(res.model, spec.seed);
  auto opt = train::OptimizerState::make(train::OptimizerKind::Adam, spec.lr, params.size());
  train::TrainConfig tc;
  tc.batch_size = spec.batch_size;
  tc.epochs = spec.epochs;
  tc.shuffle_seed = spec.seed + 2;
  tc.noise = spec.noise;
  train::TraceRow baseline;
  baseline.train_loss = split.train.size() > 0 ? train::evaluate_loss(res.model, params, split.train, {}, {}) : 0.0;
  baseline.test_loss = split.test.size() > 0 ? train::evaluate_loss(res.model, params, split.test, {}, {}) : 0.0;
  auto tr = train::train_model(res.model, std::move(params), split.train, split.test, {}, opt, tc);
  res.params = std::move(tr.params);
  res.trace.push_back(baseline);
  res.trace.insert(res.trace.end(), tr.trace.begin(), tr.trace.end());
  res.final_train_loss = train::evaluate_loss(res.model, res.params, split.train, {}, {});
  res.final_test_loss = split.test.size() > 0 ? train::evaluate_loss(res.model, res.params, split.test, {}, {}) : 0.0;
  res.prediction.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    res.prediction.push_back(hybrid::model_forward(res.model, data.x_row(i), res.params)[0]);
  }
  return res;
}

KernelTask make_kernel_task(const KernelTaskSpec& spec) {
  KernelTask task;
  task.spec = spec;
  sph::LatticeSpec ls;
  ls.spacing = spec.spacing;
  ls.ghost_layers = spec.ghost_layers;
  ls.h_ratio = spec.h_ratio;
  task.ps = sph::make_lattice(ls);
  if (spec.irregular) {
    require(spec.jitter >= 0.0 && spec.jitter < 0.5, ErrorKind::Configuration, "jitter must lie in [0, 0.5)");
    task.ps = sph::jitter(task.ps, spec.jitter, spec.jitter_seed);
  }
  task.kernel = sph::KernelSpec{task.ps.h, 2};
  task.nl = sph::build_neighbors(task.ps, task.kernel.support());
  task.dataset = qkernel::generate_kernel_dataset(task.ps, task.kernel, task.nl, spec.corrected);
  return task;
}

std::vector<double> radius_grid(double h, int n) {
  require(n >= 2, ErrorKind::Configuration, "radius grid needs >= 2 points");
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) r[static_cast<std::size_t>(k)] = 2.0 * h * k / (n - 1);
  return r;
}

double value_kernel_residual(const qkernel::PairKernel& learned, double h, double dV, int n) {
  const qkernel::ClassicalKernel classical(sph::KernelSpec{h, 2}, sph::Mat2::identity());
  double m = 0.0;
  for (const auto& row : qkernel::extract_kernel_space(learned, classical, radius_grid(h, n), dV,
                                                       qkernel::Component::Value)) {
    m = std::max(m, std::abs(row.residual));
  }
  return m;
}

qkernel::ClassicalKernel lattice_classical_kernel(const bench::AdvectionProblem& p) {
  require(!p.interior.empty(), ErrorKind::Configuration, "problem has no interior particles");
  const std::size_t i = p.interior[p.interior.size() / 2];
  return qkernel::ClassicalKernel(p.kernel, sph::correction_matrix(p.ps, p.kernel, p.nl, i).Linv);
}

}  // namespace qsph::app
