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

use thiserror::Error;

use crate::qasm::QasmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} outside supported range 1..={max}", max = crate::state::MAX_QUBITS)]
    QubitCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("classical bit {index} out of range for {num_clbits} clbits")]
    ClbitOutOfRange { index: usize, num_clbits: usize },
    #[error("duplicate qubit {0} in operand list")]
    DuplicateQubit(usize),
    #[error("qubit {0} was already measured; measurement is terminal")]
    GateAfterMeasure(usize),
    #[error("classical bit {0} is already written by another measurement")]
    ClbitReused(usize),
    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{name}` takes {expected} parameter(s), got {found}")]
    ParamCount { name: String, expected: usize, found: usize },
    #[error("non-finite gate parameter for `{0}`")]
    NonFiniteParam(String),
    #[error("controlled(): {0}")]
    UnsupportedControl(String),
    #[error("circuit has {0} qubits; unitary extraction is limited to {max}", max = crate::circuit::MAX_UNITARY_QUBITS)]
    TooManyQubitsForUnitary(usize),
    #[error("circuit contains measurements; unitary extraction needs a gate-only circuit")]
    ContainsMeasurement,
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("circuit needs {circuit} qubits but device `{device}` has {available}")]
    CircuitTooWide { circuit: usize, device: String, available: usize },
    #[error("invalid device calibration: {0}")]
    InvalidDevice(String),
    #[error("unknown device preset `{0}`")]
    UnknownPreset(String),
    #[error("exact noisy enumeration needs {0} trajectories, above the limit")]
    TooManyTrajectories(u128),
    #[error("confusion matrix limited to {max} qubits, got {0}", max = crate::mitigation::MAX_MITIGATION_QUBITS)]
    MitigationTooLarge(usize),
    #[error("confusion matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("invalid confusion matrix: {0}")]
    InvalidConfusion(String),
    #[error("gate `{0}` is not in the U1/U2/U3/CX basis")]
    NotBasis(String),
    #[error("coupling graph is not connected")]
    DisconnectedGraph,
    #[error("invalid coupling graph: {0}")]
    InvalidGraph(String),
    #[error("layout conflict: {0}")]
    LayoutConflict(String),
    #[error("angles sum to {0}, expected pi")]
    AngleSum(f64),
    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate observable: {0}")]
    Degenerate(String),
    #[error("serialization: {0}")]
    Serde(String),
    #[error(transparent)]
    Qasm(#[from] QasmError),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
