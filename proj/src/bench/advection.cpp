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
#include <string>

#include "qsph/bench.hpp"
#include "qsph/error.hpp"
#include "qsph/io.hpp"

namespace qsph::bench {

AdvectionProblem make_problem(const AdvectionSpec& spec) {
  spec.validate();
  AdvectionProblem p;
  p.spec = spec;
  sph::LatticeSpec ls;
  ls.spacing = spec.spacing;
  ls.ghost_layers = spec.ghost_layers;
  ls.h_ratio = spec.h_ratio;
  p.ps = sph::make_lattice(ls);
  p.kernel = sph::KernelSpec{p.ps.h, 2};
  p.nl = sph::build_neighbors(p.ps, p.kernel.support());

  const auto [nx, ny] = sph::lattice_counts(ls);
  const int g = spec.ghost_layers;
  const int width = nx + 2 * g;
  for (int iy = -g; iy < ny + g; ++iy) {
    for (int ix = -g; ix < nx + g; ++ix) {
      const auto idx = static_cast<std::size_t>((iy + g) * width + (ix + g));
      const bool inside = ix >= 0 && ix < nx && iy >= 0 && iy < ny;
      if (inside) {
        p.interior.push_back(idx);
        continue;
      }
      const int sx = std::clamp(ix, 0, nx - 1);
      const int sy = std::clamp(iy, 0, ny - 1);
      const auto src = static_cast<std::size_t>((sy + g) * width + (sx + g));
      const Vec2 n{ix < 0 ? -1.0 : (ix >= nx ? 1.0 : 0.0), iy < 0 ? -1.0 : (iy >= ny ? 1.0 : 0.0)};
      p.ghosts.push_back(GhostLink{idx, src, n});
    }
  }
  return p;
}

sph::GradientStencil classical_operator(const AdvectionProblem& p) {
  return sph::classical_stencil(p.ps, p.kernel, p.nl, true);
}

void extrapolate_ghosts(const AdvectionProblem& p, std::vector<double>& psi, double t) {
  for (const auto& gl : p.ghosts) {
    const Vec2 s = p.ps.pos[gl.source];
    const Vec2 u = advection_velocity(p.spec, s.x, s.y, t);
    psi[gl.ghost] = u.dot(gl.normal) > 0.0 ? psi[gl.source] : 0.0;
  }
}

void advect_step(const AdvectionProblem& p, const sph::GradientStencil& op, std::vector<double>& psi, double t,
                 std::int64_t step) {
  extrapolate_ghosts(p, psi, t);
  const std::size_t n = p.ps.size();
  std::vector<double> fx(n), fy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = advection_velocity(p.spec, p.ps.pos[i].x, p.ps.pos[i].y, t);
    fx[i] = u.x * psi[i];
    fy[i] = u.y * psi[i];
  }
  std::vector<double> next(p.interior.size());
  for (std::size_t k = 0; k < p.interior.size(); ++k) {
    const std::size_t i = p.interior[k];
    double div = 0.0;
    for (const auto& [j, w] : op.rows[i]) div += w.x * (fx[j] - fx[i]) + w.y * (fy[j] - fy[i]);
    next[k] = psi[i] - p.spec.dt * div;
    if (!std::isfinite(next[k])) {
      throw IntegrationFailureError(static_cast<std::size_t>(step),
                                    "non-finite scalar at particle " + std::to_string(i) + ", step " +
                                        std::to_string(step));
    }
  }
  for (std::size_t k = 0; k < p.interior.size(); ++k) psi[p.interior[k]] = next[k];
}

ErrorMetrics error_metrics(const std::vector<double>& pred, const std::vector<double>& ref,
                           const std::vector<std::uint8_t>& mask) {
  require(pred.size() == ref.size(), ErrorKind::Shape, "prediction and reference sizes differ");
  require(mask.empty() || mask.size() == ref.size(), ErrorKind::Shape, "mask size differs");
  ErrorMetrics m;
  m.pointwise.assign(pred.size(), 0.0);
  double num = 0.0, den = 0.0, emax = 0.0, rmax = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - ref[i];
    m.pointwise[i] = e;
    if (!mask.empty() && !mask[i]) continue;
    num += e * e;
    den += ref[i] * ref[i];
    emax = std::max(emax, std::abs(e));
    rmax = std::max(rmax, std::abs(ref[i]));
  }
  require(den > 0.0, ErrorKind::UndefinedRelative, "reference field has zero norm");
  m.l2_rel = std::sqrt(num / den);
  m.linf_rel = emax / rmax;
  return m;
}

namespace {

Snapshot take_snapshot(const AdvectionProblem& p, const std::vector<double>& psi, double t) {
  Snapshot s;
  s.t = t;
  for (std::size_t i : p.interior) {
    const Vec2 x = p.ps.pos[i];
    s.x.push_back(x.x);
    s.y.push_back(x.y);
    s.pred.push_back(psi[i]);
    s.ref.push_back(exact_scalar(p.spec, x.x, x.y, t));
    s.max_abs = std::max(s.max_abs, std::abs(psi[i]));
  }
  const auto m = error_metrics(s.pred, s.ref);
  s.l2_rel = m.l2_rel;
  s.linf_rel = m.linf_rel;
  return s;
}

}  // namespace

PeriodResult run_period(const AdvectionProblem& p, const sph::GradientStencil& op) {
  require(op.rows.size() == p.ps.size(), ErrorKind::Shape, "operator does not match the particle set");
  PeriodResult res;
  const auto& spec = p.spec;
  std::vector<double> psi(p.ps.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = initial_scalar(spec, p.ps.pos[i].x, p.ps.pos[i].y);
  extrapolate_ghosts(p, psi, 0.0);

  std::vector<double> psi0;
  for (std::size_t i : p.interior) psi0.push_back(psi[i]);
  const double dv = spec.spacing * spec.spacing;
  for (double v : psi0) res.mass_initial += v * dv;

  std::vector<double> times = spec.snapshot_times;
  std::sort(times.begin(), times.end());
  const std::int64_t total = times.empty() ? 0 : spec.steps_to(times.back());
  std::size_t next = 0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const double t = static_cast<double>(s) * spec.dt;
    while (next < times.size() && spec.steps_to(times[next]) == s) res.snapshots.push_back(take_snapshot(p, psi, times[next++]));
    for (std::size_t i : p.interior) res.max_abs = std::max(res.max_abs, std::abs(psi[i]));
    if (s == total) break;
    advect_step(p, op, psi, t, s + 1);
  }
  res.steps = total;

  std::vector<double> final_vals;
  for (std::size_t i : p.interior) {
    final_vals.push_back(psi[i]);
    res.mass_final += psi[i] * dv;
  }
  res.final_vs_initial_l2 = error_metrics(final_vals, psi0).l2_rel;
  return res;
}

void write_snapshot_csv(const std::string& path, const Snapshot& s) {
  io::CsvWriter w(path, {"x", "y", "psi_pred", "psi_ref", "err"});
  for (std::size_t k = 0; k < s.x.size(); ++k) w.row(s.x[k], s.y[k], s.pred[k], s.ref[k], s.pred[k] - s.ref[k]);
}

}  // namespace qsph::bench
