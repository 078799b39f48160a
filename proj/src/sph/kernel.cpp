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
#include <limits>
#include <numbers>

#include "qsph/error.hpp"
#include "qsph/sph.hpp"

namespace qsph::sph {

Mat2 Mat2::inverse() const {
  const double dt = det();
  return {d / dt, -b / dt, -c / dt, a / dt};
}

double Mat2::condition() const {
  // Singular values of a 2x2 matrix from its Frobenius norm and determinant.
  const double f = a * a + b * b + c * c + d * d;
  const double dt = std::abs(det());
  const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * dt * dt));
  const double s_max = std::sqrt((f + disc) / 2.0);
  const double s_min2 = (f - disc) / 2.0;
  if (s_min2 <= 0.0) return std::numeric_limits<double>::infinity();
  return s_max / std::sqrt(s_min2);
}

double KernelSpec::alpha_d() const {
  if (dim == 3) return 21.0 / (16.0 * std::numbers::pi * h * h * h);
  return 7.0 / (4.0 * std::numbers::pi * h * h);
}

double quintic_w(double q, const KernelSpec& k) {
  if (q >= 2.0) return 0.0;
  const double t = 1.0 - q / 2.0;
  const double t2 = t * t;
  return k.alpha_d() * t2 * t2 * (2.0 * q + 1.0);
}

double quintic_dwdq(double q, const KernelSpec& k) {
  if (q >= 2.0) return 0.0;
  const double t = 1.0 - q / 2.0;
  const double t3 = t * t * t;
  return k.alpha_d() * (-2.0 * t3 * (2.0 * q + 1.0) + 2.0 * t3 * t);
}

Vec2 quintic_grad(Vec2 r, const KernelSpec& k) {
  const double dist = r.norm();
  require(dist > 0.0, ErrorKind::UndefinedDirection, "kernel gradient is undefined at zero displacement");
  const double s = quintic_dwdq(dist / k.h, k) / (k.h * dist);
  return r * s;
}

}  // namespace qsph::sph
