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

#include "qsph/qsph.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "qsph/app.hpp"
#include "qsph/error.hpp"
#include "qsph/hybrid.hpp"
#include "qsph/qkernel.hpp"
#include "qsph/qsim.hpp"

using nlohmann::json;

struct qsph_circuit {
  qsph::qsim::CircuitSpec spec;
};

struct qsph_state {
  qsph::qsim::StateVector sv;
};

struct qsph_model {
  qsph::hybrid::HybridModel model;
  std::vector<double> params;
};

struct qsph_kernel {
  std::unique_ptr<qsph::qkernel::PairKernel> k;
};

namespace {

thread_local std::string g_last_error;

qsph_status set_error(qsph_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <typename F>
qsph_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return QSPH_OK;
  } catch (const qsph::Error& e) {
    return set_error(e.is_numerical() ? QSPH_ERR_NUMERICAL : QSPH_ERR_CONFIG, e.what());
  } catch (const json::exception& e) {
    return set_error(QSPH_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QSPH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QSPH_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(QSPH_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) qsph::fail(qsph::ErrorKind::Configuration, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qsph_version(void) { return "0.1.0"; }

const char* qsph_last_error(void) { return g_last_error.c_str(); }

void qsph_string_free(char* s) { std::free(s); }

qsph_status qsph_circuit_from_json(const char* text, qsph_circuit** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<qsph_circuit>();
    c->spec = qsph::qsim::circuit_from_json(json::parse(text));
    *out = c.release();
  });
}

qsph_status qsph_circuit_to_json(const qsph_circuit* c, char** out) {
  return guarded([&] {
    need(c, "circuit");
    need(out, "out");
    *out = dup_string(qsph::qsim::to_json(c->spec).dump());
  });
}

qsph_status qsph_circuit_param_counts(const qsph_circuit* c, int* n_qubits, int* n_trainable, int* n_encoded) {
  return guarded([&] {
    need(c, "circuit");
    if (n_qubits) *n_qubits = c->spec.n_qubits;
    if (n_trainable) *n_trainable = c->spec.n_trainable;
    if (n_encoded) *n_encoded = c->spec.n_encoded;
  });
}

qsph_status qsph_circuit_run(const qsph_circuit* c, const double* trainable, size_t n_trainable,
                             const double* encoded, size_t n_encoded, qsph_state** out) {
  return guarded([&] {
    need(c, "circuit");
    need(out, "out");
    *out = nullptr;
    if (n_trainable > 0) need(trainable, "trainable");
    if (n_encoded > 0) need(encoded, "encoded");
    auto sv = qsph::qsim::run_circuit(c->spec, {trainable, n_trainable}, {encoded, n_encoded});
    *out = new qsph_state{std::move(sv)};
  });
}

void qsph_circuit_free(qsph_circuit* c) { delete c; }

qsph_status qsph_state_n_qubits(const qsph_state* s, int* out) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    *out = s->sv.n_qubits();
  });
}

qsph_status qsph_state_amplitudes(const qsph_state* s, double* out, size_t len) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    qsph::require(len == 2 * s->sv.size(), qsph::ErrorKind::Shape, "amplitude buffer must hold 2 * 2^n doubles");
    const auto a = s->sv.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[2 * i] = a[i].real();
      out[2 * i + 1] = a[i].imag();
    }
  });
}

qsph_status qsph_state_expectation_z(const qsph_state* s, int qubit, double* out) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    *out = qsph::qsim::expectation_z(s->sv, qubit);
  });
}

qsph_status qsph_state_probabilities(const qsph_state* s, double* out, size_t len) {
  return guarded([&] {
    need(s, "state");
    need(out, "out");
    qsph::require(len == s->sv.size(), qsph::ErrorKind::Shape, "probability buffer must hold 2^n doubles");
    const auto p = qsph::qsim::measure_probabilities(s->sv);
    std::memcpy(out, p.data(), p.size() * sizeof(double));
  });
}

void qsph_state_free(qsph_state* s) { delete s; }

qsph_status qsph_model_from_json(const char* text, qsph_model** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = nullptr;
    auto m = std::make_unique<qsph_model>();
    m->model = qsph::hybrid::model_from_json(json::parse(text), &m->params);
    *out = m.release();
  });
}

qsph_status qsph_model_dims(const qsph_model* m, int* input_width, int* output_width, size_t* n_params) {
  return guarded([&] {
    need(m, "model");
    if (input_width) *input_width = m->model.input_width;
    if (output_width) *output_width = m->model.output_width;
    if (n_params) *n_params = m->params.size();
  });
}

qsph_status qsph_model_forward(const qsph_model* m, const double* x, size_t n_in, double* y, size_t n_out) {
  return guarded([&] {
    need(m, "model");
    need(x, "x");
    need(y, "y");
    qsph::require(n_in == static_cast<size_t>(m->model.input_width), qsph::ErrorKind::Shape,
                  "input length does not match the model");
    qsph::require(n_out == static_cast<size_t>(m->model.output_width), qsph::ErrorKind::Shape,
                  "output length does not match the model");
    const auto r = qsph::hybrid::model_forward(m->model, {x, n_in}, m->params);
    std::memcpy(y, r.data(), r.size() * sizeof(double));
  });
}

void qsph_model_free(qsph_model* m) { delete m; }

qsph_status qsph_kernel_load(const char* text, qsph_kernel** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = nullptr;
    auto k = std::make_unique<qsph_kernel>();
    k->k = qsph::qkernel::kernel_from_json(json::parse(text));
    *out = k.release();
  });
}

qsph_status qsph_kernel_value(const qsph_kernel* k, double rx, double ry, double dv, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(out, "out");
    *out = k->k->value({rx, ry}, dv);
  });
}

qsph_status qsph_kernel_gradient(const qsph_kernel* k, double rx, double ry, double dv, double* gx, double* gy) {
  return guarded([&] {
    need(k, "kernel");
    need(gx, "gx");
    need(gy, "gy");
    const auto g = k->k->gradient({rx, ry}, dv);
    *gx = g.x;
    *gy = g.y;
  });
}

void qsph_kernel_free(qsph_kernel* k) { delete k; }

qsph_status qsph_default_config(const char* command, char** out) {
  return guarded([&] {
    need(command, "command");
    need(out, "out");
    *out = dup_string(qsph::app::default_config(command).dump(2));
  });
}

qsph_status qsph_run_command(const char* command, const char* config_json, const char* out_dir,
                             char** report_json) {
  return guarded([&] {
    need(command, "command");
    need(out_dir, "out_dir");
    if (report_json) *report_json = nullptr;
    json cfg = config_json ? json::parse(config_json) : json::object();
    const auto report = qsph::app::run_command(command, cfg, out_dir);
    if (report_json) *report_json = dup_string(report.dump(2));
  });
}

}  // extern "C"
