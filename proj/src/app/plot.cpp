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

#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "qsph/error.hpp"

namespace qsph::app::plot {

namespace {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  int w, h;
  std::vector<Rgb> px;
  Image(int w_, int h_) : w(w_), h(h_), px(static_cast<std::size_t>(w_ * h_), Rgb{255, 255, 255}) {}
  void set(int x, int y, Rgb c) {
    if (x >= 0 && x < w && y >= 0 && y < h) px[static_cast<std::size_t>(y * w + x)] = c;
  }
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << "P6\n" << w << ' ' << h << "\n255\n";
    for (const auto& c : px) out.write(reinterpret_cast<const char*>(c.data()), 3);
  }
};

std::uint8_t lerp8(double a, double b, double t) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * t)); }

// t in [0, 1]: blue - white - red.
Rgb diverging(double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (t < 0.5) {
    const double s = t / 0.5;
    return {lerp8(59, 255, s), lerp8(76, 255, s), lerp8(192, 255, s)};
  }
  const double s = (t - 0.5) / 0.5;
  return {lerp8(255, 180, s), lerp8(255, 4, s), lerp8(255, 38, s)};
}

// t in [0, 1]: dark blue to yellow.
Rgb sequential(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return {lerp8(68, 253, t), lerp8(1, 231, t), lerp8(84, 37, t)};
}

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double a : v) {
    if (out.empty() || a - out.back() > 1e-9) out.push_back(a);
  }
  return out;
}

int slot(const std::vector<double>& axis, double a) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), a - 1e-9);
  return static_cast<int>(it - axis.begin());
}

const std::array<Rgb, 6> kPalette{{{31, 119, 180}, {214, 39, 40}, {44, 160, 44}, {148, 103, 189}, {255, 127, 14}, {23, 190, 207}}};

}  // namespace

void heatmap(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& v) {
  require(x.size() == y.size() && y.size() == v.size() && !v.empty(), ErrorKind::Shape, "heatmap inputs differ in size");
  const auto xs = unique_sorted(x);
  const auto ys = unique_sorted(y);
  const int cell = std::max(1, 512 / static_cast<int>(std::max(xs.size(), ys.size())));
  Image img(cell * static_cast<int>(xs.size()), cell * static_cast<int>(ys.size()));
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  const bool signed_data = lo < 0.0 && hi > 0.0;
  const double amp = std::max(std::abs(lo), std::abs(hi));
  for (std::size_t k = 0; k < v.size(); ++k) {
    Rgb c;
    if (signed_data) {
      c = diverging(amp > 0.0 ? 0.5 + 0.5 * v[k] / amp : 0.5);
    } else {
      c = sequential(hi > lo ? (v[k] - lo) / (hi - lo) : 0.5);
    }
    const int cx = slot(xs, x[k]);
    const int cy = static_cast<int>(ys.size()) - 1 - slot(ys, y[k]);
    for (int dy = 0; dy < cell; ++dy)
      for (int dx = 0; dx < cell; ++dx) img.set(cx * cell + dx, cy * cell + dy, c);
  }
  img.save(path);
}

void lines(const std::string& path, const std::vector<Series>& series, bool log_y) {
  const int W = 640, H = 400, pad = 30;
  Image img(W, H);
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.y[k]) || (log_y && s.y[k] <= 0.0)) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, ty(s.y[k]));
      y1 = std::max(y1, ty(s.y[k]));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  for (int px = pad; px <= W - pad; ++px) {
    img.set(px, pad, {0, 0, 0});
    img.set(px, H - pad, {0, 0, 0});
  }
  for (int py = pad; py <= H - pad; ++py) {
    img.set(pad, py, {0, 0, 0});
    img.set(W - pad, py, {0, 0, 0});
  }
  auto map_x = [&](double v) { return pad + (v - x0) / (x1 - x0) * (W - 2 * pad); };
  auto map_y = [&](double v) { return H - pad - (ty(v) - y0) / (y1 - y0) * (H - 2 * pad); };
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const Rgb c = kPalette[si % kPalette.size()];
    for (std::size_t k = 1; k < s.x.size() && k < s.y.size(); ++k) {
      if (log_y && (s.y[k - 1] <= 0.0 || s.y[k] <= 0.0)) continue;
      const double ax = map_x(s.x[k - 1]), ay = map_y(s.y[k - 1]);
      const double bx = map_x(s.x[k]), by = map_y(s.y[k]);
      const int steps = static_cast<int>(std::max(std::abs(bx - ax), std::abs(by - ay))) + 1;
      for (int t = 0; t <= steps; ++t) {
        const double f = static_cast<double>(t) / steps;
        img.set(static_cast<int>(std::lround(ax + (bx - ax) * f)), static_cast<int>(std::lround(ay + (by - ay) * f)), c);
      }
    }
  }
  img.save(path);
}

}  // namespace qsph::app::plot
