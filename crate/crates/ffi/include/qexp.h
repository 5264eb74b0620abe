#ifndef QEXP_H
#define QEXP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum QexpStatus {
  QEXP_STATUS_OK = 0,
  QEXP_STATUS_NULL_POINTER = 1,
  QEXP_STATUS_INVALID_UTF8 = 2,
  QEXP_STATUS_INVALID_ARGUMENT = 3,
  QEXP_STATUS_PARSE_ERROR = 4,
  QEXP_STATUS_SIMULATION_ERROR = 5,
  QEXP_STATUS_DEVICE_ERROR = 6,
  QEXP_STATUS_DEGENERATE = 7,
  QEXP_STATUS_BUFFER_TOO_SMALL = 8,
  QEXP_STATUS_PANIC = 9,
} QexpStatus;

/**
 * Opaque circuit handle.
 */
typedef struct QexpCircuit QexpCircuit;

/**
 * Opaque device calibration handle.
 */
typedef struct QexpDevice QexpDevice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *qexp_last_error_message(void);

/**
 * Release a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qexp_string_free(char *s);

/**
 * Parse an OpenQASM 2.0 program.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum QexpStatus qexp_circuit_from_qasm(const char *source, struct QexpCircuit **out);

/**
 * Emit a circuit as OpenQASM 2.0; free the result with `qexp_string_free`.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QexpStatus qexp_circuit_to_qasm(const struct QexpCircuit *circuit, char **out);

/**
 * Quantum eraser circuit.
 *
 * # Safety
 * `out` must be writable.
 */
enum QexpStatus qexp_circuit_eraser(bool erase, struct QexpCircuit **out);

/**
 * Single-stage bomb tester.
 *
 * # Safety
 * `out` must be writable.
 */
enum QexpStatus qexp_circuit_bomb(bool bomb_present, struct QexpCircuit **out);

/**
 * Multi-stage bomb tester; `thetas` must sum to pi.
 *
 * # Safety
 * `thetas` must point to `len` doubles; `out` must be writable.
 */
enum QexpStatus qexp_circuit_general_bomb(const double *thetas,
                                          size_t len,
                                          struct QexpCircuit **out);

/**
 * Hardy circuit with beamsplitter angles in `[0, pi]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QexpStatus qexp_circuit_hardy(double theta0, double theta1, struct QexpCircuit **out);

/**
 * Release a circuit. Null is ignored.
 *
 * # Safety
 * `circuit` must come from this library and not be freed twice.
 */
void qexp_circuit_free(struct QexpCircuit *circuit);

/**
 * Number of qubits.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QexpStatus qexp_circuit_num_qubits(const struct QexpCircuit *circuit, size_t *out);

/**
 * Length of the count arrays filled by the sampling calls: `2^m` for
 * `m` measured qubits, or `2^n` when nothing is measured.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be writable.
 */
enum QexpStatus qexp_circuit_outcome_count(const struct QexpCircuit *circuit, size_t *out);

/**
 * Exact ideal probabilities of all `2^n` basis states, qubit 0 as the
 * most significant index bit.
 *
 * # Safety
 * `circuit` must be a live handle; `probs` must hold `len` doubles.
 */
enum QexpStatus qexp_circuit_probabilities(const struct QexpCircuit *circuit,
                                           double *probs,
                                           size_t len);

/**
 * Ideal shot sampling into `counts`, indexed by measured bitstring.
 *
 * # Safety
 * `circuit` must be a live handle; `counts` must hold `len` entries.
 */
enum QexpStatus qexp_circuit_sample_counts(const struct QexpCircuit *circuit,
                                           uint64_t shots,
                                           uint64_t seed,
                                           uint64_t *counts,
                                           size_t len);

/**
 * Built-in device calibration, e.g. `"vigo-08-20"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum QexpStatus qexp_device_preset(const char *name, struct QexpDevice **out);

/**
 * Device from a JSON calibration document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum QexpStatus qexp_device_from_json(const char *json, struct QexpDevice **out);

/**
 * Release a device. Null is ignored.
 *
 * # Safety
 * `device` must come from this library and not be freed twice.
 */
void qexp_device_free(struct QexpDevice *device);

/**
 * Number of physical qubits.
 *
 * # Safety
 * `device` must be a live handle; `out` must be writable.
 */
enum QexpStatus qexp_device_num_qubits(const struct QexpDevice *device, size_t *out);

/**
 * Noisy shot sampling into `counts`, indexed by measured bitstring.
 *
 * # Safety
 * Handles must be live; `counts` must hold `len` entries.
 */
enum QexpStatus qexp_simulate_noisy(const struct QexpCircuit *circuit,
                                    const struct QexpDevice *device,
                                    uint64_t shots,
                                    uint64_t seed,
                                    uint64_t *counts,
                                    size_t len);

/**
 * Transpile with the default layout and report the product-model error
 * `1 - fidelity`.
 *
 * # Safety
 * Handles must be live; `error` must be writable.
 */
enum QexpStatus qexp_estimate_fidelity(const struct QexpCircuit *circuit,
                                       const struct QexpDevice *device,
                                       double *error);

/**
 * Closed-form multi-stage efficiency for angles summing to pi.
 *
 * # Safety
 * `thetas` must point to `len` doubles; `out` must be writable.
 */
enum QexpStatus qexp_eta_general(const double *thetas, size_t len, double *out);

/**
 * Closed-form post-selected nonlocal probability.
 *
 * # Safety
 * `out` must be writable.
 */
enum QexpStatus qexp_gamma_closed(double theta0, double theta1, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QEXP_H */
