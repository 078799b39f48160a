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
#include <string>

#include "qsph/error.hpp"
#include "qsph/sph.hpp"

namespace qsph::sph {

double sph_value(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl, std::size_t i) {
  double acc = (quintic_w(0.0, k) * ps.volume[i]) * ps.value[i];
  for (const auto& nb : nl.lists[i]) acc += (quintic_w(nb.dist / k.h, k) * ps.volume[nb.j]) * ps.value[nb.j];
  return acc;
}

Vec2 sph_gradient(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl, std::size_t i) {
  Vec2 acc;
  const double fi = ps.value[i];
  for (const auto& nb : nl.lists[i]) acc += (quintic_grad(nb.r, k) * ps.volume[nb.j]) * (ps.value[nb.j] - fi);
  return acc;
}

CorrectionMatrix correction_matrix(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl,
                                   std::size_t i) {
  Mat2 L;
  double scale = 0.0;
  for (const auto& nb : nl.lists[i]) {
    const Vec2 g = quintic_grad(nb.r, k) * ps.volume[nb.j];
    const Vec2 d = -nb.r;  // x_j - x_i
    L.a += g.x * d.x;
    L.b += g.x * d.y;
    L.c += g.y * d.x;
    L.d += g.y * d.y;
    scale += std::abs(g.dot(d));
  }
  const double det = L.det();
  if (!(std::abs(det) > 1e-10 * scale * scale) || !std::isfinite(det)) {
    throw DegenerateStencilError(i, "correction matrix of particle " + std::to_string(i) +
                                        " is singular (|det| = " + std::to_string(std::abs(det)) + ")");
  }
  return CorrectionMatrix{L, L.inverse(), L.condition()};
}

std::vector<CorrectionMatrix> correction_matrices(const ParticleSet& ps, const KernelSpec& k,
                                                  const NeighborList& nl) {
  std::vector<CorrectionMatrix> out(ps.size(), CorrectionMatrix{Mat2::identity(), Mat2::identity(), 1.0});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.interior.empty() || ps.interior[i]) out[i] = correction_matrix(ps, k, nl, i);
  }
  return out;
}

Vec2 corrected_gradient(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl,
                        const std::vector<CorrectionMatrix>& corr, std::size_t i) {
  return corr[i].Linv * sph_gradient(ps, k, nl, i);
}

GradientStencil classical_stencil(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl,
                                  bool corrected) {
  GradientStencil st;
  st.rows.assign(ps.size(), {});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!ps.interior.empty() && !ps.interior[i]) continue;
    const Mat2 Linv = corrected ? correction_matrix(ps, k, nl, i).Linv : Mat2::identity();
    auto& row = st.rows[i];
    row.reserve(nl.lists[i].size());
    for (const auto& nb : nl.lists[i]) row.emplace_back(nb.j, Linv * (quintic_grad(nb.r, k) * ps.volume[nb.j]));
  }
  return st;
}

std::vector<Vec2> apply_stencil(const GradientStencil& st, const std::vector<double>& f) {
  std::vector<Vec2> out(st.rows.size());
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    Vec2 acc;
    const double fi = f[i];
    for (const auto& [j, w] : st.rows[i]) acc += w * (f[j] - fi);
    out[i] = acc;
  }
  return out;
}

}  // namespace qsph::sph
