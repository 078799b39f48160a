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

#include "qsph/error.hpp"
#include "qsph/sph.hpp"

namespace qsph::sph {

NeighborList build_neighbors(const ParticleSet& ps, double cutoff) {
  require(cutoff > 0.0, ErrorKind::Configuration, "neighbour cutoff must be positive");
  NeighborList nl;
  nl.cutoff = cutoff;
  const std::size_t n = ps.size();
  nl.lists.assign(n, {});
  if (n == 0) return nl;

  Vec2 lo = ps.pos[0], hi = ps.pos[0];
  for (const auto& p : ps.pos) {
    require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::Configuration, "non-finite particle position");
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const auto nx = static_cast<std::size_t>(std::floor((hi.x - lo.x) / cutoff)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((hi.y - lo.y) / cutoff)) + 1;
  auto cell_of = [&](Vec2 p) {
    const auto cx = std::min(nx - 1, static_cast<std::size_t>((p.x - lo.x) / cutoff));
    const auto cy = std::min(ny - 1, static_cast<std::size_t>((p.y - lo.y) / cutoff));
    return std::pair{cx, cy};
  };

  // Counting sort of particles into cells.
  std::vector<std::size_t> start(nx * ny + 1, 0);
  std::vector<std::size_t> cell_id(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(ps.pos[i]);
    cell_id[i] = cy * nx + cx;
    ++start[cell_id[i] + 1];
  }
  for (std::size_t c = 0; c < nx * ny; ++c) start[c + 1] += start[c];
  std::vector<std::size_t> sorted(n);
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < n; ++i) sorted[fill[cell_id[i]]++] = i;

  for (std::size_t i = 0; i < n; ++i) {
    const auto [cx, cy] = cell_of(ps.pos[i]);
    auto& list = nl.lists[i];
    for (std::size_t yy = cy > 0 ? cy - 1 : 0; yy <= std::min(ny - 1, cy + 1); ++yy) {
      for (std::size_t xx = cx > 0 ? cx - 1 : 0; xx <= std::min(nx - 1, cx + 1); ++xx) {
        const std::size_t c = yy * nx + xx;
        for (std::size_t s = start[c]; s < start[c + 1]; ++s) {
          const std::size_t j = sorted[s];
          if (j == i) continue;
          const Vec2 r = ps.pos[i] - ps.pos[j];
          const double d = r.norm();
          if (d < cutoff) list.push_back(Neighbor{j, r, d});
        }
      }
    }
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.j < b.j; });
  }
  return nl;
}

}  // namespace qsph::sph
