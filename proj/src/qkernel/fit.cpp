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

#include "qsph/error.hpp"
#include "qsph/qkernel.hpp"

namespace qsph::qkernel {

namespace {

FittedModel fit_one(const train::Dataset& data, double scale, hybrid::ModelRecipe recipe, std::vector<double> lower,
                    std::vector<double> upper, const KernelFitConfig& cfg, std::uint64_t seed,
                    std::vector<train::TraceRow>& trace) {
  recipe.input_width = data.in_width;
  recipe.output_width = data.out_width;
  recipe.input_lower = std::move(lower);
  recipe.input_upper = std::move(upper);
  FittedModel fm;
  fm.model = hybrid::build_model(recipe);
  fm.model.seed = seed;
  fm.output_scale = scale;
  const auto split = train::split_dataset(data, 0.8, seed + 1);
  auto params = hybrid::init_params(fm.model, seed);
  auto opt = train::OptimizerState::make(train::OptimizerKind::Adam, cfg.lr, params.size());
  train::TrainConfig tc;
  tc.batch_size = cfg.batch_size;
  tc.epochs = cfg.epochs;
  tc.shuffle_seed = seed + 2;
  tc.noise = cfg.noise;
  auto res = train::train_model(fm.model, std::move(params), split.train, split.test, {}, opt, tc);
  fm.params = std::move(res.params);
  trace = std::move(res.trace);
  return fm;
}

}  // namespace

KernelFit fit_kernel(const KernelDataset& d, const KernelFitConfig& cfg) {
  require(!d.samples.empty(), ErrorKind::EmptyDataset, "kernel dataset is empty");
  KernelFit fit;
  FittedModel value_model;
  FittedModel grad_model;
  if (cfg.fit_value) {
    const auto data = value_training_set(d, value_scale(d));
    value_model = fit_one(data, value_scale(d), cfg.recipe, {0.0, 0.0}, {1.0, 1.0}, cfg, cfg.seed, fit.value_trace);
  }
  if (cfg.fit_grad) {
    const double scale = grad_scale(d, cfg.eta);
    const auto data = grad_training_set(d, cfg.eta, scale);
    std::vector<double> lo = cfg.eta == PreMap::Identity ? std::vector<double>{-1.0, -1.0, 0.0}
                                                         : std::vector<double>{0.0, 0.0};
    std::vector<double> hi = cfg.eta == PreMap::Identity ? std::vector<double>{1.0, 1.0, 1.0}
                                                         : std::vector<double>{1.0, 1.0};
    grad_model = fit_one(data, scale, cfg.recipe, std::move(lo), std::move(hi), cfg, cfg.seed + 100, fit.grad_trace);
  }
  fit.kernel = std::make_unique<LearnedKernel>(d.h, d.dv_max, cfg.eta, std::move(value_model), std::move(grad_model));
  return fit;
}

}  // namespace qsph::qkernel
