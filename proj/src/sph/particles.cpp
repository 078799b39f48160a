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
#include <random>
#include <string>

#include "qsph/error.hpp"
#include "qsph/io.hpp"
#include "qsph/random.hpp"
#include "qsph/sph.hpp"

namespace qsph::sph {

void ParticleSet::validate() const {
  require(h > 0.0 && spacing > 0.0, ErrorKind::Configuration, "smoothing length and spacing must be positive");
  require(volume.size() == pos.size() && value.size() == pos.size(), ErrorKind::Shape,
          "particle arrays have different lengths");
  require(interior.empty() || interior.size() == pos.size(), ErrorKind::Shape, "interior mask length mismatch");
  for (std::size_t i = 0; i < pos.size(); ++i) {
    require(std::isfinite(pos[i].x) && std::isfinite(pos[i].y), ErrorKind::Configuration,
            "particle " + std::to_string(i) + " has a non-finite position");
    require(volume[i] > 0.0, ErrorKind::Configuration, "particle " + std::to_string(i) + " has a non-positive volume");
  }
}

std::pair<int, int> lattice_counts(const LatticeSpec& s) {
  require(s.spacing > 0.0 && s.x1 > s.x0 && s.y1 > s.y0, ErrorKind::Configuration, "invalid lattice extent");
  const int nx = static_cast<int>(std::lround((s.x1 - s.x0) / s.spacing)) + 1;
  const int ny = static_cast<int>(std::lround((s.y1 - s.y0) / s.spacing)) + 1;
  return {nx, ny};
}

ParticleSet make_lattice(const LatticeSpec& s) {
  require(s.ghost_layers >= 0, ErrorKind::Configuration, "ghost layer count must be >= 0");
  require(s.h_ratio > 0.0, ErrorKind::Configuration, "h ratio must be positive");
  const auto [nx, ny] = lattice_counts(s);
  const int g = s.ghost_layers;
  ParticleSet ps;
  ps.spacing = s.spacing;
  ps.h = s.h_ratio * s.spacing;
  for (int iy = -g; iy < ny + g; ++iy) {
    for (int ix = -g; ix < nx + g; ++ix) {
      ps.pos.push_back({s.x0 + ix * s.spacing, s.y0 + iy * s.spacing});
      ps.volume.push_back(s.spacing * s.spacing);
      ps.value.push_back(0.0);
      ps.interior.push_back(ix >= 0 && ix < nx && iy >= 0 && iy < ny ? 1 : 0);
    }
  }
  return ps;
}

ParticleSet jitter(const ParticleSet& ps, double fraction, std::uint64_t seed) {
  ParticleSet out = ps;
  std::mt19937_64 rng(seed);
  const double amp = fraction * ps.spacing;
  for (auto& p : out.pos) {
    p.x += uniform(rng, -amp, amp);
    p.y += uniform(rng, -amp, amp);
  }
  return out;
}

void write_particles_csv(const std::string& path, const ParticleSet& ps) {
  io::CsvWriter w(path, {"x", "y", "volume", "value", "interior_flag"});
  for (std::size_t i = 0; i < ps.size(); ++i) {
    w.row(ps.pos[i].x, ps.pos[i].y, ps.volume[i], ps.value[i], ps.interior.empty() || ps.interior[i] ? 1 : 0);
  }
}

ParticleSet read_particles_csv(const std::string& path, double h, double spacing) {
  const auto rows = io::read_csv(path);
  require(!rows.empty(), ErrorKind::Io, "particle CSV '" + path + "' is empty");
  const std::vector<std::string> expect{"x", "y", "volume", "value", "interior_flag"};
  require(rows[0] == expect, ErrorKind::Io, "particle CSV '" + path + "' has an unexpected header");
  ParticleSet ps;
  ps.h = h;
  ps.spacing = spacing;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    require(rows[r].size() == 5, ErrorKind::Io, "particle CSV row " + std::to_string(r) + " has the wrong width");
    try {
      ps.pos.push_back({std::stod(rows[r][0]), std::stod(rows[r][1])});
      ps.volume.push_back(std::stod(rows[r][2]));
      ps.value.push_back(std::stod(rows[r][3]));
      ps.interior.push_back(std::stoi(rows[r][4]) != 0 ? 1 : 0);
    } catch (const std::exception&) {
      fail(ErrorKind::Io, "particle CSV row " + std::to_string(r) + " is not numeric");
    }
  }
  ps.validate();
  return ps;
}

}  // namespace qsph::sph
