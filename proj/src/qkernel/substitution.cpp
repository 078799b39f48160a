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

#include <array>
#include <cmath>
#include <set>

#include "qsph/error.hpp"
#include "qsph/io.hpp"
#include "qsph/qkernel.hpp"

namespace qsph::qkernel {

KernelDataset generate_kernel_dataset(const sph::ParticleSet& ps, const sph::KernelSpec& k,
                                      const sph::NeighborList& nl, bool corrected) {
  KernelDataset d;
  d.corrected = corrected;
  d.h = k.h;
  std::set<std::array<long long, 3>> seen;
  double dv_max = 0.0;
  for (double v : ps.volume) dv_max = std::max(dv_max, v);
  require(dv_max > 0.0, ErrorKind::EmptyDataset, "particle set has no positive volume");
  d.dv_max = dv_max;

  auto add = [&](Vec2 r, double dV, double w, Vec2 g) {
    const std::array<long long, 3> key{std::llround(r.x / k.h * 1e9), std::llround(r.y / k.h * 1e9),
                                       std::llround(dV / dv_max * 1e9)};
    if (!seen.insert(key).second) return;
    d.samples.push_back(PairSample{r, dV, w, g});
  };

  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps.interior.empty() && !ps.interior[i]) continue;
    if (nl.lists[i].empty()) continue;
    const sph::Mat2 linv = corrected ? sph::correction_matrix(ps, k, nl, i).Linv : sph::Mat2::identity();
    add(Vec2{}, ps.volume[i], sph::quintic_w(0.0, k) * ps.volume[i], Vec2{});
    for (const auto& nb : nl.lists[i]) {
      const double dV = ps.volume[nb.j];
      add(nb.r, dV, sph::quintic_w(nb.dist / k.h, k) * dV, linv * (sph::quintic_grad(nb.r, k) * dV));
    }
  }
  require(!d.samples.empty(), ErrorKind::EmptyDataset, "no interior particle has neighbours");
  return d;
}

namespace {

double radial(const PairSample& s) { return s.grad_target.dot(s.r) / s.r.norm(); }

}  // namespace

double value_scale(const KernelDataset& d) {
  double m = 0.0;
  for (const auto& s : d.samples) m = std::max(m, std::abs(s.value_target));
  return m > 0.0 ? m : 1.0;
}

double grad_scale(const KernelDataset& d, PreMap eta) {
  double m = 0.0;
  for (const auto& s : d.samples) {
    if (s.r.norm() == 0.0) continue;
    if (eta == PreMap::Identity) {
      m = std::max({m, std::abs(s.grad_target.x), std::abs(s.grad_target.y)});
    } else {
      m = std::max(m, std::abs(radial(s)));
    }
  }
  return m > 0.0 ? m : 1.0;
}

train::Dataset value_training_set(const KernelDataset& d, double scale) {
  train::Dataset out;
  out.in_width = 2;
  out.out_width = 1;
  for (const auto& s : d.samples) {
    const double x[2] = {s.r.norm() / (2.0 * d.h), s.dV / d.dv_max};
    const double y[1] = {s.value_target / scale};
    out.push(x, y);
  }
  return out;
}

train::Dataset grad_training_set(const KernelDataset& d, PreMap eta, double scale) {
  train::Dataset out;
  out.in_width = eta == PreMap::Identity ? 3 : 2;
  out.out_width = eta == PreMap::Identity ? 2 : 1;
  const double two_h = 2.0 * d.h;
  for (const auto& s : d.samples) {
    const double dist = s.r.norm();
    if (dist == 0.0) continue;
    const double dv = s.dV / d.dv_max;
    if (eta == PreMap::Identity) {
      const double x[3] = {s.r.x / two_h, s.r.y / two_h, dv};
      const double y[2] = {s.grad_target.x / scale, s.grad_target.y / scale};
      out.push(x, y);
    } else {
      const double q = eta == PreMap::NormDistance ? dist / two_h : (dist * dist) / (two_h * two_h);
      const double x[2] = {q, dv};
      const double y[1] = {radial(s) / scale};
      out.push(x, y);
    }
  }
  return out;
}

double quantum_sph_value(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                         std::size_t i) {
  double acc = kernel.value(Vec2{}, ps.volume[i]) * ps.value[i];
  for (const auto& nb : nl.lists[i]) acc += kernel.value(nb.r, ps.volume[nb.j]) * ps.value[nb.j];
  return acc;
}

Vec2 quantum_sph_gradient(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                          std::size_t i) {
  Vec2 acc;
  const double fi = ps.value[i];
  for (const auto& nb : nl.lists[i]) acc += kernel.gradient(nb.r, ps.volume[nb.j]) * (ps.value[nb.j] - fi);
  return acc;
}

Vec2 quantum_momentum_rhs(const PairKernel& kernel, const sph::ParticleSet& ps, const sph::NeighborList& nl,
                          const std::vector<Vec2>& velocities, const ExternalForce& f_ext, std::size_t i) {
  require(velocities.size() == ps.size(), ErrorKind::Shape, "one velocity per particle required");
  Vec2 acc;
  const Vec2 vi = velocities[i];
  for (const auto& nb : nl.lists[i]) {
    const Vec2 g = kernel.gradient(nb.r, ps.volume[nb.j]);
    const Vec2 vji = velocities[nb.j] - vi;
    acc += Vec2{g.x * vji.x, g.y * vji.y};
  }
  if (f_ext) acc += f_ext(i);
  return acc;
}

sph::GradientStencil kernel_stencil(const PairKernel& kernel, const sph::ParticleSet& ps,
                                    const sph::NeighborList& nl) {
  sph::GradientStencil st;
  st.rows.assign(ps.size(), {});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps.interior.empty() && !ps.interior[i]) continue;
    auto& row = st.rows[i];
    row.reserve(nl.lists[i].size());
    for (const auto& nb : nl.lists[i]) row.emplace_back(nb.j, kernel.gradient(nb.r, ps.volume[nb.j]));
  }
  return st;
}

std::vector<KernelSpaceRow> extract_kernel_space(const PairKernel& learned, const PairKernel& classical,
                                                 const std::vector<double>& r_grid, double dV, Component c) {
  std::vector<KernelSpaceRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    double l = 0.0, k = 0.0;
    if (c == Component::Value) {
      l = learned.value(Vec2{r, 0.0}, dV);
      k = classical.value(Vec2{r, 0.0}, dV);
    } else if (c == Component::GradX) {
      l = learned.gradient(Vec2{r, 0.0}, dV).x;
      k = classical.gradient(Vec2{r, 0.0}, dV).x;
    } else {
      l = learned.gradient(Vec2{0.0, r}, dV).y;
      k = classical.gradient(Vec2{0.0, r}, dV).y;
    }
    rows.push_back(KernelSpaceRow{r, l, k, l - k});
  }
  return rows;
}

void write_kernel_space_csv(const std::string& path, const std::vector<KernelSpaceRow>& rows) {
  io::CsvWriter w(path, {"r", "learned", "classical", "residual"});
  for (const auto& row : rows) w.row(row.r, row.learned, row.classical, row.residual);
}

}  // namespace qsph::qkernel
