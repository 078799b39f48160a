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
#include <numbers>
#include <random>

#include "qsph/bench.hpp"
#include "qsph/error.hpp"
#include "qsph/random.hpp"

namespace qsph::bench {

namespace {
constexpr double kPi = std::numbers::pi;
}

VortexFieldSpec VortexFieldSpec::defaults(std::uint64_t phase_seed) {
  VortexFieldSpec s;
  s.vortices = {
      {0.4, 0.6, 1.2, 0.25, 1.5, 15.0, 5, 0.3, 2.0},
      {0.6, 0.4, 1.0, 0.20, 2.0, 12.0, 3, 0.4, 2.5},
      {0.5, 0.5, 0.8, 0.35, 0.8, 8.0, 7, 0.2, 1.5},
  };
  std::mt19937_64 rng(phase_seed);
  for (int j = 0; j < s.fine_count; ++j) s.fine_phases.push_back(uniform(rng, 0.0, 2.0 * kPi));
  return s;
}

double vortex_component(const VortexParams& p, double x, double y, double t) {
  require(p.sigma > 0.0, ErrorKind::Configuration, "vortex sigma must be positive");
  const double dx = x - p.cx;
  const double dy = y - p.cy;
  const double r = std::hypot(dx, dy);
  const double theta = r > 0.0 ? std::atan2(dy, dx) : 0.0;
  const double envelope = p.A * std::exp(-r * r / (2.0 * p.sigma * p.sigma));
  const double wave = std::sin(p.omega * t + p.k * r + p.m * theta);
  const double azimuthal = 1.0 + p.alpha * std::cos(p.beta * theta);
  return envelope * wave * azimuthal * std::tanh(r / p.sigma);
}

double total_field(const VortexFieldSpec& spec, double x, double y, double t) {
  double z = 0.0;
  for (const auto& v : spec.vortices) z += vortex_component(v, x, y, t);
  require(static_cast<int>(spec.fine_phases.size()) >= spec.fine_count, ErrorKind::Configuration,
          "fine-structure phases not materialised");
  for (int j = 1; j <= spec.fine_count; ++j) {
    const double kx = 20.0 + 5.0 * j;
    const double ky = 15.0 + 3.0 * j;
    z += spec.fine_amp * std::sin(kx * x + ky * y + spec.fine_phases[static_cast<std::size_t>(j - 1)] + t);
  }
  z += spec.bg_amp * (std::sin(3.0 * kPi * x) * std::cos(2.0 * kPi * y) * std::cos(0.3 * t) +
                      std::sin(2.0 * kPi * (x + y)) * std::cos(0.5 * t));
  return std::tanh(spec.tanh_gain * z);
}

void AdvectionSpec::validate() const {
  require(period > 0.0 && dt > 0.0 && spacing > 0.0, ErrorKind::Configuration,
          "period, dt and spacing must be positive");
  require(ghost_layers >= 0 && h_ratio > 0.0, ErrorKind::Configuration, "invalid ghost layers or h ratio");
  const double n = period / dt;
  require(std::abs(n - std::round(n)) < 1e-6 * n, ErrorKind::Configuration, "period / dt must be integral");
  for (double t : snapshot_times) {
    require(t >= 0.0, ErrorKind::Configuration, "snapshot times must be >= 0");
    const double s = t / dt;
    require(std::abs(s - std::round(s)) < 1e-6 * std::max(1.0, s), ErrorKind::Configuration,
            "snapshot time is not a multiple of dt");
  }
}

std::int64_t AdvectionSpec::steps_to(double t) const { return std::llround(t / dt); }

Vec2 advection_velocity(const AdvectionSpec& spec, double x, double y, double t) {
  const double dx = x - spec.velocity_center.x;
  const double dy = y - spec.velocity_center.y;
  const double r = std::hypot(dx, dy);
  const double q = std::pow(4.0 * r, 6);
  const double g = (1.0 - q) / (1.0 + q);
  // u_theta / r, so that u = u_theta sin(theta) = (u_theta / r) dy.
  const double w = (4.0 * kPi / spec.period) * (1.0 - std::cos(2.0 * kPi * t / spec.period) * g);
  return Vec2{w * dy, -w * dx} * spec.velocity_scale;
}

double initial_scalar(const AdvectionSpec& spec, double x, double y) {
  const double rh = 5.0 * std::hypot(x - spec.scalar_center.x, y - spec.scalar_center.y);
  return rh <= 1.0 ? 0.5 + 0.5 * std::cos(kPi * rh) : 0.0;
}

double exact_scalar(const AdvectionSpec& spec, double x, double y, double t) {
  const double dx = x - spec.velocity_center.x;
  const double dy = y - spec.velocity_center.y;
  const double r = std::hypot(dx, dy);
  const double q = std::pow(4.0 * r, 6);
  const double g = (1.0 - q) / (1.0 + q);
  const double T = spec.period;
  const double dtheta =
      spec.velocity_scale * (4.0 * kPi / T) * (t - g * (T / (2.0 * kPi)) * std::sin(2.0 * kPi * t / T));
  const double theta0 = std::atan2(dy, dx) + dtheta;
  return initial_scalar(spec, spec.velocity_center.x + r * std::cos(theta0), spec.velocity_center.y + r * std::sin(theta0));
}

}  // namespace qsph::bench
