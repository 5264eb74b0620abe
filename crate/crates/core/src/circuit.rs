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

//! Circuit representation, ideal simulation and unitary extraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::state::{bitstring, Distribution, StateVector, UnitaryMatrix};

/// Largest circuit for which `unitary_of` builds the full matrix.
pub const MAX_UNITARY_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate { gate: Gate, qubits: Vec<usize> },
    Measure { qubit: usize, clbit: usize },
    Barrier { qubits: Vec<usize> },
}

impl Instruction {
    pub fn gate(gate: Gate, qubits: &[usize]) -> Self {
        Instruction::Gate { gate, qubits: qubits.to_vec() }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate { qubits, .. } | Instruction::Barrier { qubits } => qubits.clone(),
            Instruction::Measure { qubit, .. } => vec![*qubit],
        }
    }
}

/// An ordered instruction list over fixed quantum and classical registers.
///
/// Measurement is terminal: once a qubit is measured no gate may touch it.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    name: String,
    num_qubits: usize,
    num_clbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize, num_clbits: usize) -> Self {
        Self { name: name.into(), num_qubits, num_clbits, instructions: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Same register sizes and instruction list; the name is ignored.
    pub fn structurally_eq(&self, other: &Circuit) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_clbits == other.num_clbits
            && self.instructions == other.instructions
    }

    fn is_measured(&self, qubit: usize) -> bool {
        self.instructions.iter().any(|i| matches!(i, Instruction::Measure { qubit: q, .. } if *q == qubit))
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// Validate and append one instruction.
    pub fn append(&mut self, instruction: Instruction) -> Result<&mut Self> {
        match &instruction {
            Instruction::Gate { gate, qubits } => {
                if qubits.len() != gate.arity() {
                    return Err(Error::DimensionMismatch { expected: gate.arity(), found: qubits.len() });
                }
                if !gate.has_finite_params() {
                    return Err(Error::NonFiniteParam(gate.name().into()));
                }
                self.check_qubits(qubits)?;
                if let Some(&q) = qubits.iter().find(|&&q| self.is_measured(q)) {
                    return Err(Error::GateAfterMeasure(q));
                }
            }
            Instruction::Measure { qubit, clbit } => {
                self.check_qubits(&[*qubit])?;
                if *clbit >= self.num_clbits {
                    return Err(Error::ClbitOutOfRange { index: *clbit, num_clbits: self.num_clbits });
                }
                if self.is_measured(*qubit) {
                    return Err(Error::GateAfterMeasure(*qubit));
                }
                if self
                    .instructions
                    .iter()
                    .any(|i| matches!(i, Instruction::Measure { clbit: c, .. } if c == clbit))
                {
                    return Err(Error::ClbitReused(*clbit));
                }
            }
            Instruction::Barrier { qubits } => self.check_qubits(qubits)?,
        }
        self.instructions.push(instruction);
        Ok(self)
    }

    /// Functional form of `append`.
    pub fn with(mut self, instruction: Instruction) -> Result<Self> {
        self.append(instruction)?;
        Ok(self)
    }

    pub fn apply(&mut self, gate: Gate, qubits: &[usize]) -> Result<&mut Self> {
        self.append(Instruction::gate(gate, qubits))
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.apply(Gate::H, &[q])
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.apply(Gate::X, &[q])
    }

    pub fn ry(&mut self, theta: f64, q: usize) -> Result<&mut Self> {
        self.apply(Gate::Ry(theta), &[q])
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.apply(Gate::CX, &[control, target])
    }

    pub fn ccx(&mut self, c0: usize, c1: usize, target: usize) -> Result<&mut Self> {
        self.apply(Gate::CCX, &[c0, c1, target])
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<&mut Self> {
        self.append(Instruction::Measure { qubit, clbit })
    }

    /// Measure qubit i into clbit i for every qubit.
    pub fn measure_all(&mut self) -> Result<&mut Self> {
        for q in 0..self.num_qubits {
            self.measure(q, q)?;
        }
        Ok(self)
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> Result<&mut Self> {
        self.append(Instruction::Barrier { qubits: qubits.to_vec() })
    }

    /// Measured qubits in ascending order; every qubit if none is measured.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self
            .instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Measure { qubit, .. } => Some(*qubit),
                _ => None,
            })
            .collect();
        if qs.is_empty() {
            return (0..self.num_qubits).collect();
        }
        qs.sort_unstable();
        qs
    }

    pub fn has_measurements(&self) -> bool {
        self.instructions.iter().any(|i| matches!(i, Instruction::Measure { .. }))
    }

    pub fn gates(&self) -> impl Iterator<Item = (&Gate, &[usize])> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate { gate, qubits } => Some((gate, qubits.as_slice())),
            _ => None,
        })
    }

    /// Gate counts keyed by lowercase gate name.
    pub fn gate_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for (g, _) in self.gates() {
            *counts.entry(g.name().to_string()).or_insert(0) += 1;
        }
        counts
    }

    pub(crate) fn push_unchecked(&mut self, instruction: Instruction) {
        self.instructions.push(instruction);
    }
}

/// Final pure state after all gates; measurements and barriers are skipped.
pub fn simulate_ideal(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::new(circuit.num_qubits())?;
    for (gate, qubits) in circuit.gates() {
        state.apply_gate_mut(&gate.matrix(), qubits)?;
    }
    Ok(state)
}

/// Full unitary of a measurement-free circuit with at most six qubits.
pub fn unitary_of(circuit: &Circuit) -> Result<UnitaryMatrix> {
    let n = circuit.num_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubitsForUnitary(n));
    }
    if circuit.has_measurements() {
        return Err(Error::ContainsMeasurement);
    }
    let dim = 1usize << n;
    // evolve each basis column; row-major assembly afterwards
    let mut columns = Vec::with_capacity(dim);
    for col in 0..dim {
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
        amps[col] = num_complex::Complex64::new(1.0, 0.0);
        for (gate, qubits) in circuit.gates() {
            crate::state::apply_unitary_in_place(&mut amps, n, &gate.matrix(), qubits)?;
        }
        columns.push(amps);
    }
    let rows = (0..dim).map(|r| (0..dim).map(|c| columns[c][r]).collect()).collect();
    UnitaryMatrix::from_rows(rows)
}

/// Shot counts keyed by q0-leftmost bitstrings of the measured qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsHistogram {
    shots: u64,
    num_bits: usize,
    counts: BTreeMap<String, u64>,
}

impl CountsHistogram {
    pub fn new(num_bits: usize) -> Self {
        Self { shots: 0, num_bits, counts: BTreeMap::new() }
    }

    pub fn from_counts<I, S>(num_bits: usize, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut h = Self::new(num_bits);
        for (k, v) in counts {
            let k = k.into();
            if k.len() != num_bits || crate::state::parse_bitstring(&k).is_none() {
                return Err(Error::InvalidArgument(format!(
                    "bitstring `{k}` does not have width {num_bits}"
                )));
            }
            h.add(&k, v);
        }
        Ok(h)
    }

    pub(crate) fn record_index(&mut self, index: usize) {
        let key = bitstring(index, self.num_bits);
        self.add(&key, 1);
    }

    fn add(&mut self, key: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(key.to_string()).or_insert(0) += n;
        self.shots += n;
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    /// Empirical frequencies.
    pub fn to_distribution(&self) -> Distribution {
        let mut probs = vec![0.0; 1usize << self.num_bits];
        if self.shots > 0 {
            for (k, v) in &self.counts {
                let i = crate::state::parse_bitstring(k).expect("validated key");
                probs[i] = *v as f64 / self.shots as f64;
            }
        }
        Distribution::new(self.num_bits, probs).expect("frequencies are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn append_single_gate() {
        let mut c = Circuit::new("t", 2, 2);
        c.h(0).unwrap();
        assert_eq!(c.instructions().len(), 1);
    }

    #[test]
    fn gate_after_measure_rejected() {
        let mut c = Circuit::new("t", 2, 2);
        c.measure(0, 0).unwrap();
        assert_eq!(c.h(0).unwrap_err(), Error::GateAfterMeasure(0));
        // other qubits are still free
        c.h(1).unwrap();
    }

    #[test]
    fn bomb_sequence_has_five_instructions() {
        let mut c = Circuit::new("bomb", 2, 2);
        c.h(0).unwrap().cx(0, 1).unwrap().h(0).unwrap().measure_all().unwrap();
        assert_eq!(c.instructions().len(), 5);
    }

    #[test]
    fn index_errors() {
        let mut c = Circuit::new("t", 2, 1);
        assert!(matches!(c.h(2), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(c.measure(0, 1), Err(Error::ClbitOutOfRange { .. })));
        assert_eq!(c.cx(1, 1).unwrap_err(), Error::DuplicateQubit(1));
        c.measure(0, 0).unwrap();
        assert_eq!(c.measure(1, 0).unwrap_err(), Error::ClbitReused(0));
        assert!(matches!(c.append(Instruction::gate(Gate::CX, &[0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn unitary_of_small_circuits() {
        let mut c = Circuit::new("h", 1, 0);
        c.h(0).unwrap();
        assert_eq!(unitary_of(&c).unwrap(), Gate::H.matrix());
        c.h(0).unwrap();
        assert!(unitary_of(&c).unwrap().max_abs_diff(&UnitaryMatrix::identity(2)).unwrap() < 1e-12);

        let mut m = Circuit::new("m", 1, 1);
        m.measure(0, 0).unwrap();
        assert_eq!(unitary_of(&m).unwrap_err(), Error::ContainsMeasurement);
        let wide = Circuit::new("w", 7, 0);
        assert_eq!(unitary_of(&wide).unwrap_err(), Error::TooManyQubitsForUnitary(7));
    }

    #[test]
    fn barrier_does_not_change_state() {
        let mut a = Circuit::new("a", 2, 0);
        a.ry(0.7, 0).unwrap().cx(0, 1).unwrap();
        let mut b = a.clone();
        b.barrier(&[0, 1]).unwrap();
        b.ry(PI / 3.0, 1).unwrap();
        a.ry(PI / 3.0, 1).unwrap();
        assert_eq!(simulate_ideal(&a).unwrap(), simulate_ideal(&b).unwrap());
    }

    #[test]
    fn measured_qubits_sorted_and_defaulted() {
        let mut c = Circuit::new("t", 3, 3);
        assert_eq!(c.measured_qubits(), vec![0, 1, 2]);
        c.measure(2, 0).unwrap().measure(0, 1).unwrap();
        assert_eq!(c.measured_qubits(), vec![0, 2]);
    }

    #[test]
    fn counts_histogram_shots() {
        let h = CountsHistogram::from_counts(2, [("00", 3u64), ("11", 1)]).unwrap();
        assert_eq!(h.shots(), 4);
        assert_eq!(h.to_distribution().get("00"), 0.75);
        assert!(CountsHistogram::from_counts(2, [("0", 1u64)]).is_err());
    }
}
