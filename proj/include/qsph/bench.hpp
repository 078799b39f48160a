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

// Benchmark fields, the explicit scalar transport solver and error metrics.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qsph/sph.hpp"

namespace qsph::bench {

using sph::Vec2;

struct VortexParams {
  double cx, cy;
  double A;
  double sigma;
  double omega;
  double k;
  int m;
  double alpha, beta;
};

struct VortexFieldSpec {
  std::vector<VortexParams> vortices;
  double fine_amp = 0.1;
  int fine_count = 5;
  std::vector<double> fine_phases;
  double bg_amp = 0.15;
  double tanh_gain = 1.5;
  double t = 0.0;

  /// Three default vortices, phases drawn uniform in [0, 2pi) from the seed.
  static VortexFieldSpec defaults(std::uint64_t phase_seed);
};

double vortex_component(const VortexParams& p, double x, double y, double t);
double total_field(const VortexFieldSpec& spec, double x, double y, double t);

struct AdvectionSpec {
  double period = 1.0;
  double dt = 1e-4;
  double spacing = 0.02;
  Vec2 scalar_center{0.3, 0.5};
  Vec2 velocity_center{0.5, 0.5};
  int ghost_layers = 3;
  double h_ratio = 1.2;
  /// Multiplies the velocity field; 0 freezes the flow.
  double velocity_scale = 1.0;
  std::vector<double> snapshot_times{0.0, 0.15, 0.35, 0.60, 1.0};

  void validate() const;
  std::int64_t steps_to(double t) const;
};

Vec2 advection_velocity(const AdvectionSpec& spec, double x, double y, double t);
double initial_scalar(const AdvectionSpec& spec, double x, double y);
/// Closed-form transported scalar at time t.
double exact_scalar(const AdvectionSpec& spec, double x, double y, double t);

struct GhostLink {
  std::size_t ghost;
  std::size_t source;  // nearest interior particle
  Vec2 normal;         // outward, per axis in {-1, 0, 1}
};

struct AdvectionProblem {
  AdvectionSpec spec;
  sph::ParticleSet ps;
  sph::KernelSpec kernel;
  sph::NeighborList nl;
  std::vector<GhostLink> ghosts;
  std::vector<std::size_t> interior;
};

AdvectionProblem make_problem(const AdvectionSpec& spec);

/// Corrected classical gradient operator on the problem's particles.
sph::GradientStencil classical_operator(const AdvectionProblem& p);

/// Outflow ghosts copy their nearest interior value, inflow ghosts hold zero.
void extrapolate_ghosts(const AdvectionProblem& p, std::vector<double>& psi, double t);

/// psi <- psi - dt * div(u psi) on interior particles; throws
/// IntegrationFailureError carrying step on a non-finite value.
void advect_step(const AdvectionProblem& p, const sph::GradientStencil& op, std::vector<double>& psi, double t,
                 std::int64_t step);

struct ErrorMetrics {
  double l2_rel = 0.0;
  double linf_rel = 0.0;
  std::vector<double> pointwise;
};

/// Relative errors over masked entries (all entries when mask is empty).
ErrorMetrics error_metrics(const std::vector<double>& pred, const std::vector<double>& ref,
                           const std::vector<std::uint8_t>& mask = {});

struct Snapshot {
  double t = 0.0;
  std::vector<double> x, y, pred, ref;
  double l2_rel = 0.0;
  double linf_rel = 0.0;
  double max_abs = 0.0;
};

struct PeriodResult {
  std::vector<Snapshot> snapshots;
  double final_vs_initial_l2 = 0.0;
  double max_abs = 0.0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  std::int64_t steps = 0;
  std::size_t nan_count = 0;
};

/// Runs from t = 0 to the last snapshot time; snapshots hold interior particles.
PeriodResult run_period(const AdvectionProblem& p, const sph::GradientStencil& op);

void write_snapshot_csv(const std::string& path, const Snapshot& s);

}  // namespace qsph::bench
