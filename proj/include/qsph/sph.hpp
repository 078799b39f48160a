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

// Quintic-kernel SPH: summation interpolants, corrected gradients and a
// cell-list fixed-radius neighbour search.
//
// Pair displacement convention: r_ij = x_i - x_j, and grad w_ij is the
// gradient with respect to x_i.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qsph::sph {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const;
  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  /// Ratio of singular values (infinite when singular).
  double condition() const;
};

struct KernelSpec {
  double h = 1.0;
  int dim = 2;

  double alpha_d() const;
  double support() const { return 2.0 * h; }
};

double quintic_w(double q, const KernelSpec& k);
double quintic_dwdq(double q, const KernelSpec& k);
/// Gradient of w(|r|/h) with respect to x_i for r = x_i - x_j.
Vec2 quintic_grad(Vec2 r, const KernelSpec& k);

struct ParticleSet {
  std::vector<Vec2> pos;
  std::vector<double> volume;
  std::vector<double> value;
  std::vector<std::uint8_t> interior;
  double h = 1.0;
  double spacing = 1.0;

  std::size_t size() const { return pos.size(); }
  void validate() const;
};

struct Neighbor {
  std::size_t j;
  Vec2 r;  // x_i - x_j
  double dist;
};

struct NeighborList {
  double cutoff = 0.0;
  std::vector<std::vector<Neighbor>> lists;  // sorted by j, self excluded
};

/// Exact fixed-radius search (strictly below cutoff) with cell size = cutoff.
NeighborList build_neighbors(const ParticleSet& ps, double cutoff);

double sph_value(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl, std::size_t i);
Vec2 sph_gradient(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl, std::size_t i);

struct CorrectionMatrix {
  Mat2 L;
  Mat2 Linv;
  double condition = 0.0;
};

/// L[b][a] = sum_j dw_ij/dx^b (x_j - x_i)^a dV_j; throws DegenerateStencilError.
CorrectionMatrix correction_matrix(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl,
                                   std::size_t i);

/// Correction entries for every particle; non-interior particles get identity.
std::vector<CorrectionMatrix> correction_matrices(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl);

Vec2 corrected_gradient(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl,
                        const std::vector<CorrectionMatrix>& corr, std::size_t i);

/// grad f_i = sum_j w_ij (f_j - f_i); rows are empty for non-interior particles.
struct GradientStencil {
  std::vector<std::vector<std::pair<std::size_t, Vec2>>> rows;
};

GradientStencil classical_stencil(const ParticleSet& ps, const KernelSpec& k, const NeighborList& nl, bool corrected);

std::vector<Vec2> apply_stencil(const GradientStencil& st, const std::vector<double>& f);

struct LatticeSpec {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double spacing = 0.02;
  int ghost_layers = 3;
  double h_ratio = 1.2;
};

/// Square lattice covering [x0, x1] x [y0, y1] inclusive plus ghost layers.
ParticleSet make_lattice(const LatticeSpec& spec);

/// Number of lattice points along x and y (ghosts excluded).
std::pair<int, int> lattice_counts(const LatticeSpec& spec);

/// Uniform +-fraction*spacing displacement of every particle, fixed seed.
ParticleSet jitter(const ParticleSet& ps, double fraction, std::uint64_t seed);

void write_particles_csv(const std::string& path, const ParticleSet& ps);
ParticleSet read_particles_csv(const std::string& path, double h, double spacing);

}  // namespace qsph::sph
