// Copyright 2026 The qexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! C ABI over `qexp-core`.
//!
//! Circuits and devices are opaque heap handles released with their
//! `_free` function. Every fallible call returns a [`QexpStatus`]; on a
//! non-zero status, [`qexp_last_error_message`] describes the failure for
//! the calling thread. Strings returned by the library are released with
//! [`qexp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qexp_core::error::Error;
use qexp_core::experiments::{self, AngleVector};
use qexp_core::noise::{self, DeviceModel, RandomSeed};
use qexp_core::state::parse_bitstring;
use qexp_core::{transpile, Circuit, CountsHistogram};

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QexpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    SimulationError = 5,
    DeviceError = 6,
    Degenerate = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque circuit handle.
pub struct QexpCircuit(Circuit);

/// Opaque device calibration handle.
pub struct QexpDevice(DeviceModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

struct Failure(QexpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Qasm(_) => QexpStatus::ParseError,
            Error::Degenerate(_) => QexpStatus::Degenerate,
            Error::InvalidDevice(_)
            | Error::UnknownPreset(_)
            | Error::CircuitTooWide { .. }
            | Error::DisconnectedGraph
            | Error::InvalidGraph(_)
            | Error::LayoutConflict(_)
            | Error::Serde(_) => QexpStatus::DeviceError,
            Error::AngleSum(_)
            | Error::AngleOutOfRange(_)
            | Error::InvalidArgument(_)
            | Error::ZeroShots
            | Error::NonFiniteParam(_) => QexpStatus::InvalidArgument,
            _ => QexpStatus::SimulationError,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: QexpStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

/// Run `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QexpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            QexpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QexpStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(QexpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(QexpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(QexpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(QexpStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn doubles<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(QexpStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn buffer<'a, T>(p: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(fail(QexpStatus::NullPointer, format!("{what} is null")));
    }
    if len < needed {
        return Err(fail(QexpStatus::BufferTooSmall, format!("{what} holds {len} entries, {needed} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn hand_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    *out_slot(out, "out")? = Box::into_raw(Box::new(value));
    Ok(())
}

fn outcome_bits(c: &Circuit) -> usize {
    let m = c.measured_qubits().len();
    if m == 0 {
        c.num_qubits()
    } else {
        m
    }
}

fn write_counts(counts: &CountsHistogram, out: &mut [u64]) -> Result<(), Failure> {
    out.fill(0);
    for (bits, &n) in counts.counts() {
        let i =
            parse_bitstring(bits).ok_or_else(|| fail(QexpStatus::SimulationError, "bad outcome label"))?;
        out[i] = n;
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qexp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qexp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an OpenQASM 2.0 program.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_from_qasm(
    source: *const c_char,
    out: *mut *mut QexpCircuit,
) -> QexpStatus {
    guard(|| {
        let c = qexp_core::qasm::parse(text(source, "source")?).map_err(Error::from)?;
        hand_out(out, QexpCircuit(c))
    })
}

/// Emit a circuit as OpenQASM 2.0; free the result with `qexp_string_free`.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_to_qasm(
    circuit: *const QexpCircuit,
    out: *mut *mut c_char,
) -> QexpStatus {
    guard(|| {
        let program = qexp_core::qasm::emit(&borrow(circuit, "circuit")?.0).map_err(Error::from)?;
        let s = CString::new(program).map_err(|e| fail(QexpStatus::SimulationError, e.to_string()))?;
        *out_slot(out, "out")? = s.into_raw();
        Ok(())
    })
}

/// Quantum eraser circuit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_eraser(erase: bool, out: *mut *mut QexpCircuit) -> QexpStatus {
    guard(|| hand_out(out, QexpCircuit(experiments::build_eraser(erase))))
}

/// Single-stage bomb tester.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_bomb(bomb_present: bool, out: *mut *mut QexpCircuit) -> QexpStatus {
    guard(|| hand_out(out, QexpCircuit(experiments::build_bomb(bomb_present))))
}

/// Multi-stage bomb tester; `thetas` must sum to pi.
///
/// # Safety
/// `thetas` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_general_bomb(
    thetas: *const f64,
    len: usize,
    out: *mut *mut QexpCircuit,
) -> QexpStatus {
    guard(|| {
        let angles = AngleVector::new(doubles(thetas, len, "thetas")?.to_vec())?;
        hand_out(out, QexpCircuit(experiments::build_general_bomb(&angles)?))
    })
}

/// Hardy circuit with beamsplitter angles in `[0, pi]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_hardy(
    theta0: f64,
    theta1: f64,
    out: *mut *mut QexpCircuit,
) -> QexpStatus {
    guard(|| hand_out(out, QexpCircuit(experiments::build_hardy(theta0, theta1)?)))
}

/// Release a circuit. Null is ignored.
///
/// # Safety
/// `circuit` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_free(circuit: *mut QexpCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Number of qubits.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_num_qubits(circuit: *const QexpCircuit, out: *mut usize) -> QexpStatus {
    guard(|| {
        *out_slot(out, "out")? = borrow(circuit, "circuit")?.0.num_qubits();
        Ok(())
    })
}

/// Length of the count arrays filled by the sampling calls: `2^m` for
/// `m` measured qubits, or `2^n` when nothing is measured.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_outcome_count(
    circuit: *const QexpCircuit,
    out: *mut usize,
) -> QexpStatus {
    guard(|| {
        *out_slot(out, "out")? = 1usize << outcome_bits(&borrow(circuit, "circuit")?.0);
        Ok(())
    })
}

/// Exact ideal probabilities of all `2^n` basis states, qubit 0 as the
/// most significant index bit.
///
/// # Safety
/// `circuit` must be a live handle; `probs` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_probabilities(
    circuit: *const QexpCircuit,
    probs: *mut f64,
    len: usize,
) -> QexpStatus {
    guard(|| {
        let c = &borrow(circuit, "circuit")?.0;
        let out = buffer(probs, len, 1usize << c.num_qubits(), "probs")?;
        let dist = qexp_core::simulate_ideal(c)?.probabilities();
        out.copy_from_slice(dist.as_slice());
        Ok(())
    })
}

/// Ideal shot sampling into `counts`, indexed by measured bitstring.
///
/// # Safety
/// `circuit` must be a live handle; `counts` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn qexp_circuit_sample_counts(
    circuit: *const QexpCircuit,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> QexpStatus {
    guard(|| {
        let c = &borrow(circuit, "circuit")?.0;
        let out = buffer(counts, len, 1usize << outcome_bits(c), "counts")?;
        let device = DeviceModel::noiseless(c.num_qubits());
        write_counts(&noise::simulate_noisy(c, &device, shots, RandomSeed(seed))?, out)
    })
}

/// Built-in device calibration, e.g. `"vigo-08-20"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_device_preset(name: *const c_char, out: *mut *mut QexpDevice) -> QexpStatus {
    guard(|| hand_out(out, QexpDevice(noise::preset(text(name, "name")?)?)))
}

/// Device from a JSON calibration document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_device_from_json(json: *const c_char, out: *mut *mut QexpDevice) -> QexpStatus {
    guard(|| hand_out(out, QexpDevice(DeviceModel::from_json(text(json, "json")?)?)))
}

/// Release a device. Null is ignored.
///
/// # Safety
/// `device` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qexp_device_free(device: *mut QexpDevice) {
    if !device.is_null() {
        drop(Box::from_raw(device));
    }
}

/// Number of physical qubits.
///
/// # Safety
/// `device` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_device_num_qubits(device: *const QexpDevice, out: *mut usize) -> QexpStatus {
    guard(|| {
        *out_slot(out, "out")? = borrow(device, "device")?.0.num_qubits;
        Ok(())
    })
}

/// Noisy shot sampling into `counts`, indexed by measured bitstring.
///
/// # Safety
/// Handles must be live; `counts` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn qexp_simulate_noisy(
    circuit: *const QexpCircuit,
    device: *const QexpDevice,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> QexpStatus {
    guard(|| {
        let c = &borrow(circuit, "circuit")?.0;
        let d = &borrow(device, "device")?.0;
        let out = buffer(counts, len, 1usize << outcome_bits(c), "counts")?;
        write_counts(&noise::simulate_noisy(c, d, shots, RandomSeed(seed))?, out)
    })
}

/// Transpile with the default layout and report the product-model error
/// `1 - fidelity`.
///
/// # Safety
/// Handles must be live; `error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_estimate_fidelity(
    circuit: *const QexpCircuit,
    device: *const QexpDevice,
    error: *mut f64,
) -> QexpStatus {
    guard(|| {
        let c = &borrow(circuit, "circuit")?.0;
        let d = &borrow(device, "device")?.0;
        let routed = transpile::transpile(c, d, None)?;
        *out_slot(error, "error")? = transpile::estimate_fidelity(&routed, d)?.error;
        Ok(())
    })
}

/// Closed-form multi-stage efficiency for angles summing to pi.
///
/// # Safety
/// `thetas` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_eta_general(thetas: *const f64, len: usize, out: *mut f64) -> QexpStatus {
    guard(|| {
        let angles = AngleVector::new(doubles(thetas, len, "thetas")?.to_vec())?;
        *out_slot(out, "out")? = experiments::eta_general(&angles)?;
        Ok(())
    })
}

/// Closed-form post-selected nonlocal probability.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qexp_gamma_closed(theta0: f64, theta1: f64, out: *mut f64) -> QexpStatus {
    guard(|| {
        if !theta0.is_finite() || !theta1.is_finite() {
            return Err(fail(QexpStatus::InvalidArgument, "angles must be finite"));
        }
        *out_slot(out, "out")? = experiments::gamma_closed(theta0, theta1);
        Ok(())
    })
}
