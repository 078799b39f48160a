/* Copyright 2026 The qsph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the qsph shared library.
 *
 * Objects are opaque handles released with the matching *_free call. Every
 * fallible call returns a qsph_status; on failure qsph_last_error() describes
 * the problem for the calling thread. Strings returned through char** are
 * owned by the caller and released with qsph_string_free. */

#ifndef QSPH_QSPH_H_
#define QSPH_QSPH_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QSPH_BUILDING)
#    define QSPH_API __declspec(dllexport)
#  else
#    define QSPH_API __declspec(dllimport)
#  endif
#else
#  define QSPH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsph_status {
  QSPH_OK = 0,
  QSPH_ERR_INTERNAL = 1,
  QSPH_ERR_CONFIG = 2,   /* bad input, configuration or I/O */
  QSPH_ERR_NUMERICAL = 3 /* divergence, degenerate stencil, failed integration */
} qsph_status;

typedef struct qsph_circuit qsph_circuit;
typedef struct qsph_state qsph_state;
typedef struct qsph_model qsph_model;
typedef struct qsph_kernel qsph_kernel;

QSPH_API const char* qsph_version(void);
/* Message of the last failure on this thread; empty after a success. */
QSPH_API const char* qsph_last_error(void);
QSPH_API void qsph_string_free(char* s);

/* Circuits, in the JSON form produced by qsph_circuit_to_json. */
QSPH_API qsph_status qsph_circuit_from_json(const char* json, qsph_circuit** out);
QSPH_API qsph_status qsph_circuit_to_json(const qsph_circuit* c, char** out);
QSPH_API qsph_status qsph_circuit_param_counts(const qsph_circuit* c, int* n_qubits, int* n_trainable,
                                               int* n_encoded);
/* Runs the circuit from |0...0>. */
QSPH_API qsph_status qsph_circuit_run(const qsph_circuit* c, const double* trainable, size_t n_trainable,
                                      const double* encoded, size_t n_encoded, qsph_state** out);
QSPH_API void qsph_circuit_free(qsph_circuit* c);

QSPH_API qsph_status qsph_state_n_qubits(const qsph_state* s, int* out);
/* Interleaved (re, im) pairs; len must be 2 * 2^n. */
QSPH_API qsph_status qsph_state_amplitudes(const qsph_state* s, double* out, size_t len);
QSPH_API qsph_status qsph_state_expectation_z(const qsph_state* s, int qubit, double* out);
/* len must be 2^n. */
QSPH_API qsph_status qsph_state_probabilities(const qsph_state* s, double* out, size_t len);
QSPH_API void qsph_state_free(qsph_state* s);

/* Hybrid models with their parameters, as written to model.json. */
QSPH_API qsph_status qsph_model_from_json(const char* json, qsph_model** out);
QSPH_API qsph_status qsph_model_dims(const qsph_model* m, int* input_width, int* output_width, size_t* n_params);
QSPH_API qsph_status qsph_model_forward(const qsph_model* m, const double* x, size_t n_in, double* y, size_t n_out);
QSPH_API void qsph_model_free(qsph_model* m);

/* Pair kernels, as written to kernel_model.json or classical_kernel.json. */
QSPH_API qsph_status qsph_kernel_load(const char* json, qsph_kernel** out);
QSPH_API qsph_status qsph_kernel_value(const qsph_kernel* k, double rx, double ry, double dv, double* out);
QSPH_API qsph_status qsph_kernel_gradient(const qsph_kernel* k, double rx, double ry, double dv, double* gx,
                                          double* gy);
QSPH_API void qsph_kernel_free(qsph_kernel* k);

/* Commands: fit-field, train-kernel, advect, compare. config_json may be NULL
 * for defaults. report_json may be NULL. */
QSPH_API qsph_status qsph_default_config(const char* command, char** out);
QSPH_API qsph_status qsph_run_command(const char* command, const char* config_json, const char* out_dir,
                                      char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* QSPH_QSPH_H_ */
