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

#include "qsph/error.hpp"
#include "qsph/qkernel.hpp"

namespace qsph::qkernel {

using nlohmann::json;

double ClassicalKernel::value(Vec2 r, double dV) const { return sph::quintic_w(r.norm() / k_.h, k_) * dV; }

Vec2 ClassicalKernel::gradient(Vec2 r, double dV) const {
  if (r.norm() == 0.0) return {};
  return linv_ * (sph::quintic_grad(r, k_) * dV);
}

json ClassicalKernel::to_json() const {
  return json{{"kind", "classical"},
              {"h", k_.h},
              {"correction_inverse", std::vector<double>{linv_.a, linv_.b, linv_.c, linv_.d}}};
}

std::string_view to_string(PreMap m) {
  switch (m) {
    case PreMap::Identity:
      return "identity";
    case PreMap::NormDistance:
      return "norm";
    case PreMap::InnerDistance:
      return "inner";
  }
  return "?";
}

PreMap premap_from_string(std::string_view s) {
  if (s == "identity") return PreMap::Identity;
  if (s == "norm") return PreMap::NormDistance;
  if (s == "inner") return PreMap::InnerDistance;
  fail(ErrorKind::Configuration, "unknown pre-map '" + std::string(s) + "' (expected identity|norm|inner)");
}

LearnedKernel::LearnedKernel(double h, double dv_max, PreMap eta, FittedModel value_model, FittedModel grad_model)
    : h_(h), dv_max_(dv_max), eta_(eta), value_(std::move(value_model)), grad_(std::move(grad_model)) {
  require(h_ > 0.0 && dv_max_ > 0.0, ErrorKind::Configuration, "kernel normalisation must be positive");
  if (!value_.params.empty()) {
    require(value_.model.input_width == 2 && value_.model.output_width == 1, ErrorKind::Configuration,
            "value model must map 2 inputs to 1 output");
  }
  if (!grad_.params.empty()) {
    const int in = eta_ == PreMap::Identity ? 3 : 2;
    const int out = eta_ == PreMap::Identity ? 2 : 1;
    require(grad_.model.input_width == in && grad_.model.output_width == out, ErrorKind::Configuration,
            "gradient model widths do not match the pre-map");
  }
}

double LearnedKernel::clamp(double v, double lo, double hi) const {
  if (v < lo - 1e-12 || v > hi + 1e-12) ++clamps_;
  return std::clamp(v, lo, hi);
}

double LearnedKernel::value(Vec2 r, double dV) const {
  if (value_.params.empty()) return 0.0;
  const double f[2] = {clamp(r.norm() / (2.0 * h_), 0.0, 1.0), clamp(dV / dv_max_, 0.0, 1.0)};
  return hybrid::model_forward(value_.model, f, value_.params)[0] * value_.output_scale;
}

Vec2 LearnedKernel::gradient(Vec2 r, double dV) const {
  if (grad_.params.empty()) return {};
  const double dv = clamp(dV / dv_max_, 0.0, 1.0);
  const double two_h = 2.0 * h_;
  if (eta_ == PreMap::Identity) {
    const double f[3] = {clamp(r.x / two_h, -1.0, 1.0), clamp(r.y / two_h, -1.0, 1.0), dv};
    const auto out = hybrid::model_forward(grad_.model, f, grad_.params);
    return Vec2{out[0], out[1]} * grad_.output_scale;
  }
  const double dist = r.norm();
  if (dist == 0.0) return {};
  const double q = eta_ == PreMap::NormDistance ? dist / two_h : (dist * dist) / (two_h * two_h);
  const double f[2] = {clamp(q, 0.0, 1.0), dv};
  const double g = hybrid::model_forward(grad_.model, f, grad_.params)[0] * grad_.output_scale;
  return r * (g / dist);
}

namespace {

json fitted_json(const FittedModel& m) {
  if (m.params.empty()) return nullptr;
  return json{{"model", hybrid::to_json(m.model, m.params)}, {"output_scale", m.output_scale}};
}

FittedModel fitted_from_json(const json& j) {
  FittedModel m;
  if (j.is_null()) return m;
  m.model = hybrid::model_from_json(j.at("model"), &m.params);
  m.output_scale = j.at("output_scale").get<double>();
  return m;
}

}  // namespace

json LearnedKernel::to_json() const {
  return json{{"kind", "learned"},   {"h", h_},
              {"dv_max", dv_max_},   {"premap", std::string(qkernel::to_string(eta_))},
              {"value", fitted_json(value_)}, {"grad", fitted_json(grad_)}};
}

std::unique_ptr<PairKernel> kernel_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "classical") {
      sph::KernelSpec k{j.at("h").get<double>(), 2};
      sph::Mat2 linv = sph::Mat2::identity();
      if (j.contains("correction_inverse")) {
        const auto c = j.at("correction_inverse").get<std::vector<double>>();
        require(c.size() == 4, ErrorKind::Configuration, "correction_inverse needs 4 entries");
        linv = {c[0], c[1], c[2], c[3]};
      }
      return std::make_unique<ClassicalKernel>(k, linv);
    }
    if (kind == "learned") {
      return std::make_unique<LearnedKernel>(j.at("h").get<double>(), j.at("dv_max").get<double>(),
                                             premap_from_string(j.at("premap").get<std::string>()),
                                             fitted_from_json(j.at("value")), fitted_from_json(j.at("grad")));
    }
    fail(ErrorKind::Configuration, "unknown kernel kind '" + kind + "'");
  } catch (const json::exception& e) {
    fail(ErrorKind::Configuration, std::string("malformed kernel JSON: ") + e.what());
  }
}

}  // namespace qsph::qkernel
