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

// Lagrangian kernel networks: trained models standing in for the SPH pair
// weights w_ij dV_j and grad w_ij dV_j.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsph/hybrid.hpp"
#include "qsph/sph.hpp"
#include "qsph/train.hpp"

namespace qsph::qkernel {

using sph::Vec2;

/// Pair weight provider; r is x_i - x_j.
class PairKernel {
 public:
  virtual ~PairKernel() = default;
  /// Stand-in for w(|r|/h) dV.
  virtual double value(Vec2 r, double dV) const = 0;
  /// Stand-in for (L^-1) grad w dV.
  virtual Vec2 gradient(Vec2 r, double dV) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

/// Exact Quintic weights, optionally multiplied by one fixed correction.
class ClassicalKernel final : public PairKernel {
 public:
  explicit ClassicalKernel(sph::KernelSpec k, sph::Mat2 correction_inverse = sph::Mat2::identity())
      : k_(k), linv_(correction_inverse) {}

  double value(Vec2 r, double dV) const override;
  Vec2 gradient(Vec2 r, double dV) const override;
  nlohmann::json to_json() const override;

  const sph::KernelSpec& spec() const { return k_; }

 private:
  sph::KernelSpec k_;
  sph::Mat2 linv_;
};

enum class PreMap { Identity, NormDistance, InnerDistance };

std::string_view to_string(PreMap m);
PreMap premap_from_string(std::string_view s);

/// One trained hybrid model with its input normalisation and output scale.
struct FittedModel {
  hybrid::HybridModel model;
  std::vector<double> params;
  double output_scale = 1.0;
};

/// Learned weights. Inputs are normalised by (r / 2h, dV / dv_max) and
/// clamped to the training box; every clamp is counted.
class LearnedKernel final : public PairKernel {
 public:
  LearnedKernel(double h, double dv_max, PreMap eta, FittedModel value_model, FittedModel grad_model);

  double value(Vec2 r, double dV) const override;
  Vec2 gradient(Vec2 r, double dV) const override;
  nlohmann::json to_json() const override;

  std::size_t clamp_count() const { return clamps_; }
  void reset_clamp_count() { clamps_ = 0; }
  PreMap premap() const { return eta_; }
  double h() const { return h_; }
  double dv_max() const { return dv_max_; }
  const FittedModel& value_model() const { return value_; }
  const FittedModel& grad_model() const { return grad_; }

 private:
  double clamp(double v, double lo, double hi) const;

  double h_;
  double dv_max_;
  PreMap eta_;
  FittedModel value_;
  FittedModel grad_;
  mutable std::size_t clamps_ = 0;
};

/// Reads either kernel kind from its JSON document.
std::unique_ptr<PairKernel> kernel_from_json(const nlohmann::json& j);

struct PairSample {
  Vec2 r;
  double dV;
  double value_target;
  Vec2 grad_target;
};

struct KernelDataset {
  std::vector<PairSample> samples;
  bool corrected = false;
  double h = 1.0;
  double dv_max = 1.0;
  std::uint64_t split_seed = 0;
};

/// One sample per interior neighbour pair plus the r = 0 self sample;
/// exact duplicates are dropped. Throws an empty-dataset error.
KernelDataset generate_kernel_dataset(const sph::ParticleSet& ps, const sph::KernelSpec& k,
                                      const sph::NeighborList& nl, bool corrected);

/// Model-space training sets, with targets divided by the given scale.
train::Dataset value_training_set(const KernelDataset& d, double scale);
train::Dataset grad_training_set(const KernelDataset& d, PreMap eta, double scale);

/// Largest |target| of each kind, used as output scale.
double value_scale(const KernelDataset& d);
double grad_scale(const KernelDataset& d, PreMap eta);

double quantum_sph_value(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                         std::size_t i);
Vec2 quantum_sph_gradient(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                          std::size_t i);

using ExternalForce = std::function<Vec2(std::size_t i)>;

/// a_i = sum_j g_ij (componentwise) v_ji + f_ext(i), with g from the kernel gradient.
Vec2 quantum_momentum_rhs(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                          const std::vector<Vec2>& velocities, const ExternalForce& f_ext, std::size_t i);

/// Gradient stencil whose pair weights come from the kernel.
sph::GradientStencil kernel_stencil(const PairKernel& kernel, const sph::ParticleSet& ps,
                                    const sph::NeighborList& nl);

struct KernelSpaceRow {
  double r;
  double learned;
  double classical;
  double residual;
};

enum class Component { Value, GradX, GradY };

/// Learned vs classical weights for r on the grid, along +x for GradX and
/// along +y for GradY.
std::vector<KernelSpaceRow> extract_kernel_space(const PairKernel& learned, const PairKernel& classical,
                                                 const std::vector<double>& r_grid, double dV, Component c);

void write_kernel_space_csv(const std::string& path, const std::vector<KernelSpaceRow>& rows);

struct KernelFitConfig {
  hybrid::ModelRecipe recipe;
  PreMap eta = PreMap::Identity;
  double lr = 0.001;
  int batch_size = 256;
  int epochs = 300;
  std::uint64_t seed = 0;
  train::NoiseSpec noise;
  bool fit_value = true;
  bool fit_grad = true;
};

struct KernelFit {
  std::unique_ptr<LearnedKernel> kernel;
  std::vector<train::TraceRow> value_trace;
  std::vector<train::TraceRow> grad_trace;
};

/// Trains the value and gradient models on an 80/20 split of the dataset.
KernelFit fit_kernel(const KernelDataset& d, const KernelFitConfig& cfg);

}  // namespace qsph::qkernel
