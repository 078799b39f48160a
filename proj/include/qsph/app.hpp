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

// Experiment drivers shared by the command line, the C API and the tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsph/bench.hpp"
#include "qsph/hybrid.hpp"
#include "qsph/qkernel.hpp"
#include "qsph/train.hpp"

namespace qsph::app {

/// Vortex field sampled on an n x n lattice over the unit square.
struct FieldTaskSpec {
  int n = 32;
  double t = 0.0;
  std::uint64_t phase_seed = 7;
  double h_ratio = 1.2;
  int ghost_layers = 3;
};

/// One sample per interior particle: the 21 stencil values (self first, then
/// neighbours by index) mapped to the classical SPH value sum.
struct FieldTask {
  FieldTaskSpec spec;
  sph::ParticleSet ps;
  sph::KernelSpec kernel;
  sph::NeighborList nl;
  std::vector<std::size_t> rows;
  train::Dataset data;
};

FieldTask make_field_task(const FieldTaskSpec& spec);

struct FitSpec {
  hybrid::ModelRecipe recipe;
  double lr = 0.001;
  int batch_size = 256;
  int epochs = 300;
  std::uint64_t seed = 1;
  double train_frac = 0.8;
  train::NoiseSpec noise;
};

struct FitResult {
  hybrid::HybridModel model;
  std::vector<double> params;
  std::vector<train::TraceRow> trace;  // epoch 0 is the untrained baseline
  std::vector<double> prediction;  // first output, one per dataset row
  double final_train_loss = 0.0;
  double final_test_loss = 0.0;
};

/// Seeds: init = seed, split = seed + 1, shuffle = seed + 2.
FitResult fit_dataset(const train::Dataset& data, const FitSpec& spec);

hybrid::ModelRecipe field_recipe(hybrid::Level level, qnn::Family family, qnn::HeadKind head);

/// Kernel learning on a regular or jittered lattice.
struct KernelTaskSpec {
  double spacing = 0.04;
  double h_ratio = 1.2;
  int ghost_layers = 3;
  bool irregular = false;
  double jitter = 0.2;
  std::uint64_t jitter_seed = 11;
  bool corrected = true;
};

struct KernelTask {
  KernelTaskSpec spec;
  sph::ParticleSet ps;
  sph::KernelSpec kernel;
  sph::NeighborList nl;
  qkernel::KernelDataset dataset;
};

KernelTask make_kernel_task(const KernelTaskSpec& spec);

/// Grid of n points over [0, 2h].
std::vector<double> radius_grid(double h, int n = 101);

/// Max |learned - classical| of the value kernel over the grid at volume dV.
double value_kernel_residual(const qkernel::PairKernel& learned, double h, double dV, int n = 101);

/// Classical kernel carrying the correction of a representative interior
/// lattice particle.
qkernel::ClassicalKernel lattice_classical_kernel(const bench::AdvectionProblem& p);

/// Runs a command and writes its artifacts into out_dir. Returns the report.
/// The resolved configuration is echoed to out_dir/run.json.
nlohmann::json run_command(const std::string& command, const nlohmann::json& config, const std::string& out_dir);

/// Full configuration with defaults for a command.
nlohmann::json default_config(const std::string& command);

}  // namespace qsph::app
