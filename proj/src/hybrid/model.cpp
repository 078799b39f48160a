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
#include <string>

#include "qsph/error.hpp"
#include "qsph/hybrid.hpp"
#include "qsph/random.hpp"

namespace qsph::hybrid {

using nlohmann::json;

std::string_view to_string(Level l) {
  switch (l) {
    case Level::SingleCircuit:
      return "single";
    case Level::ForwardHierarchy:
      return "forward";
    case Level::CrossedHybrid:
      return "crossed";
    case Level::ParallelHybrid:
      return "parallel";
  }
  return "?";
}

Level level_from_string(std::string_view s) {
  if (s == "single") return Level::SingleCircuit;
  if (s == "forward") return Level::ForwardHierarchy;
  if (s == "crossed") return Level::CrossedHybrid;
  if (s == "parallel") return Level::ParallelHybrid;
  fail(ErrorKind::Configuration, "unknown model level '" + std::string(s) + "' (expected single|forward|crossed|parallel)");
}

namespace {

int check_stack(const std::vector<DenseShape>& stack, int in, const char* name) {
  int width = in;
  for (std::size_t k = 0; k < stack.size(); ++k) {
    require(stack[k].rows >= 1 && stack[k].cols >= 1, ErrorKind::Configuration,
            std::string(name) + " layer " + std::to_string(k) + " has an empty shape");
    require(stack[k].cols == width, ErrorKind::Configuration,
            std::string(name) + " layer " + std::to_string(k) + " expects " + std::to_string(stack[k].cols) +
                " inputs but receives " + std::to_string(width));
    width = stack[k].rows;
  }
  return width;
}

}  // namespace

void HybridModel::validate() const {
  quantum.validate();
  switch (level) {
    case Level::SingleCircuit:
    case Level::ParallelHybrid:
      require(front.empty() && back.empty(), ErrorKind::Configuration,
              std::string(to_string(level)) + " model takes no front/back layers");
      break;
    case Level::ForwardHierarchy:
      require(!front.empty() && back.empty(), ErrorKind::Configuration,
              "forward hierarchy needs front layers and no back layers");
      break;
    case Level::CrossedHybrid:
      require(!front.empty() && !back.empty(), ErrorKind::Configuration,
              "crossed hybrid needs front and back layers");
      break;
  }
  const int enc_in = check_stack(front, input_width, "front");
  require(enc_in == quantum.in_width(), ErrorKind::Configuration,
          "front output width " + std::to_string(enc_in) + " != encoder features " +
              std::to_string(quantum.in_width()));
  const int out = check_stack(back, quantum.out_width(), "back");
  require(out == output_width, ErrorKind::Configuration,
          "quantum/back output width " + std::to_string(out) + " != model output width " +
              std::to_string(output_width));
  if (level == Level::ParallelHybrid) {
    require(!parallel.empty(), ErrorKind::Configuration, "parallel hybrid needs a classical branch");
    require(check_stack(parallel, input_width, "parallel") == output_width, ErrorKind::Configuration,
            "parallel branch output width mismatch");
  } else {
    require(parallel.empty(), ErrorKind::Configuration, "only the parallel hybrid has a classical branch");
  }
}

ParamLayout parameter_layout(const HybridModel& model) {
  ParamLayout layout;
  std::size_t off = 0;
  auto add_stack = [&](const std::vector<DenseShape>& stack, Segment::Kind kind) {
    for (std::size_t k = 0; k < stack.size(); ++k) {
      const auto n = static_cast<std::size_t>(stack[k].n_params());
      layout.segments.push_back(Segment{kind, static_cast<int>(k), off, n});
      off += n;
    }
  };
  add_stack(model.front, Segment::Kind::Front);
  layout.quantum_offset = off;
  layout.quantum_size = static_cast<std::size_t>(model.quantum.n_trainable());
  layout.segments.push_back(Segment{Segment::Kind::Quantum, -1, off, layout.quantum_size});
  off += layout.quantum_size;
  add_stack(model.back, Segment::Kind::Back);
  add_stack(model.parallel, Segment::Kind::Parallel);
  if (model.level == Level::ParallelHybrid) {
    layout.segments.push_back(Segment{Segment::Kind::Aggregation, -1, off, 2});
    off += 2;
  }
  layout.total = off;
  return layout;
}

std::vector<double> model_forward(const HybridModel& model, std::span<const double> x,
                                  std::span<const double> params) {
  const auto layout = parameter_layout(model);
  require(params.size() == layout.total, ErrorKind::Configuration,
          "expected " + std::to_string(layout.total) + " parameters, got " + std::to_string(params.size()));
  require(static_cast<int>(x.size()) == model.input_width, ErrorKind::Configuration,
          "expected input width " + std::to_string(model.input_width) + ", got " + std::to_string(x.size()));

  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> z, y;
  std::size_t seg = 0;
  for (const auto& shape : model.front) {
    const auto& s = layout.segments[seg++];
    dense_apply(shape, params.subspan(s.offset, s.size), cur, z, y);
    cur.swap(y);
  }
  cur = qnn::quantum_forward(model.quantum, params.subspan(layout.quantum_offset, layout.quantum_size), cur);
  ++seg;
  for (const auto& shape : model.back) {
    const auto& s = layout.segments[seg++];
    dense_apply(shape, params.subspan(s.offset, s.size), cur, z, y);
    cur.swap(y);
  }
  if (model.level != Level::ParallelHybrid) return cur;

  std::vector<double> cls(x.begin(), x.end());
  for (const auto& shape : model.parallel) {
    const auto& s = layout.segments[seg++];
    dense_apply(shape, params.subspan(s.offset, s.size), cls, z, y);
    cls.swap(y);
  }
  const auto& agg = layout.segments[seg];
  const double a1 = params[agg.offset];
  const double a2 = params[agg.offset + 1];
  std::vector<double> out(cls.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a1 * cls[k] + a2 * cur[k];
  return out;
}

std::vector<double> init_params(const HybridModel& model, std::uint64_t seed) {
  const auto layout = parameter_layout(model);
  std::vector<double> p(layout.total, 0.0);
  std::mt19937_64 rng(seed);
  std::size_t seg = 0;
  auto init_stack = [&](const std::vector<DenseShape>& stack) {
    for (const auto& shape : stack) {
      const auto& s = layout.segments[seg++];
      const double bound = std::sqrt(1.0 / shape.cols);
      for (std::size_t k = 0; k < s.size; ++k) p[s.offset + k] = uniform(rng, -bound, bound);
    }
  };
  init_stack(model.front);
  for (std::size_t k = 0; k < layout.quantum_size; ++k) {
    p[layout.quantum_offset + k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  }
  ++seg;
  init_stack(model.back);
  init_stack(model.parallel);
  if (model.level == Level::ParallelHybrid) {
    p[layout.total - 2] = 1.0;
    p[layout.total - 1] = 1.0;
  }
  return p;
}

HybridModel build_model(const ModelRecipe& r) {
  require(r.input_width >= 1 && r.output_width >= 1, ErrorKind::Configuration, "model widths must be >= 1");
  require(r.front_hidden >= 1 && r.back_hidden >= 1, ErrorKind::Configuration, "hidden widths must be >= 1");

  HybridModel m;
  m.level = r.level;
  m.input_width = r.input_width;
  m.output_width = r.output_width;

  const bool has_front = r.level == Level::ForwardHierarchy || r.level == Level::CrossedHybrid;
  const bool has_back = r.level == Level::CrossedHybrid;

  qnn::EncoderSpec enc;
  enc.kind = r.encoder;
  int n_qubits = r.n_qubits;
  if (has_front) {
    enc.n_features = r.encoder == qnn::EncoderKind::Angle ? r.n_qubits : (1 << r.n_qubits);
    if (r.encoder == qnn::EncoderKind::Angle) {
      enc.lower.assign(static_cast<std::size_t>(enc.n_features), -1.0);
      enc.upper.assign(static_cast<std::size_t>(enc.n_features), 1.0);
    }
    m.front = {DenseShape{r.front_hidden, r.input_width, Activation::Tanh},
               DenseShape{enc.n_features, r.front_hidden, Activation::Tanh}};
  } else {
    enc.n_features = r.input_width;
    if (r.encoder == qnn::EncoderKind::Angle) {
      enc.lower = r.input_lower;
      enc.upper = r.input_upper;
    } else {
      n_qubits = std::max(n_qubits, qnn::encoder_qubits(enc));
    }
  }
  enc.validate();

  qnn::AnsatzSpec ansatz{r.family, n_qubits, r.n_layers, -1};
  int head_qubits = -1;
  bool parity = false;
  if (!has_back) {
    if (r.head == qnn::HeadKind::PauliZ) {
      head_qubits = r.output_width;
    } else {
      require(r.output_width == 1, ErrorKind::Configuration,
              "probability head without back layers supports a scalar output only");
      parity = true;
    }
  }
  m.quantum = qnn::make_block(enc, ansatz, r.head, head_qubits, parity);
  require(has_back || m.quantum.out_width() == r.output_width, ErrorKind::Configuration,
          "quantum head cannot produce " + std::to_string(r.output_width) + " outputs");
  if (has_back) {
    m.back = {DenseShape{r.back_hidden, m.quantum.out_width(), Activation::Tanh},
              DenseShape{r.output_width, r.back_hidden, Activation::Identity}};
  }
  if (r.level == Level::ParallelHybrid) {
    m.parallel = {DenseShape{r.front_hidden, r.input_width, Activation::Tanh},
                  DenseShape{r.output_width, r.front_hidden, Activation::Identity}};
  }
  m.validate();
  return m;
}

namespace {

json stack_json(const std::vector<DenseShape>& stack) {
  json a = json::array();
  for (const auto& s : stack) a.push_back({{"rows", s.rows}, {"cols", s.cols}, {"activation", to_string(s.act)}});
  return a;
}

std::vector<DenseShape> stack_from_json(const json& j, const char* key) {
  std::vector<DenseShape> out;
  if (!j.contains(key)) return out;
  for (const auto& e : j.at(key)) {
    out.push_back(DenseShape{e.at("rows").get<int>(), e.at("cols").get<int>(),
                             activation_from_string(e.at("activation").get<std::string>())});
  }
  return out;
}

}  // namespace

json to_json(const HybridModel& model, std::span<const double> params) {
  json j;
  j["level"] = std::string(to_string(model.level));
  j["input_width"] = model.input_width;
  j["output_width"] = model.output_width;
  j["front"] = stack_json(model.front);
  j["quantum"] = qnn::to_json(model.quantum);
  j["back"] = stack_json(model.back);
  if (!model.parallel.empty()) j["parallel"] = stack_json(model.parallel);
  j["seed"] = model.seed;
  if (!params.empty()) j["params"] = std::vector<double>(params.begin(), params.end());
  return j;
}

HybridModel model_from_json(const json& j, std::vector<double>* params) {
  HybridModel m;
  try {
    m.level = level_from_string(j.at("level").get<std::string>());
    m.input_width = j.at("input_width").get<int>();
    m.output_width = j.at("output_width").get<int>();
    m.front = stack_from_json(j, "front");
    m.quantum = qnn::block_from_json(j.at("quantum"));
    m.back = stack_from_json(j, "back");
    m.parallel = stack_from_json(j, "parallel");
    m.seed = j.value("seed", std::uint64_t{0});
    m.validate();
    if (params != nullptr && j.contains("params")) {
      *params = j.at("params").get<std::vector<double>>();
      require(params->size() == parameter_layout(m).total, ErrorKind::Configuration,
              "stored parameter count does not match the model layout");
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Configuration, std::string("malformed model JSON: ") + e.what());
  }
  return m;
}

}  // namespace qsph::hybrid
