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

//! Dense statevector and unitary matrices.
//!
//! Qubit `q0` is the most significant bit of an amplitude index, so the
//! bitstring `"10"` (q0 = 1, q1 = 0) is index 2. Bitstrings are always
//! written with q0 leftmost.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities (normalization, unitarity).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for end-to-end circuit versus closed-form comparisons.
pub const CIRCUIT_TOL: f64 = 1e-9;
/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Render `index` as a bitstring of `width` characters, most significant first.
pub fn bitstring(index: usize, width: usize) -> String {
    (0..width).map(|k| if (index >> (width - 1 - k)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parse a q0-leftmost bitstring back into an index.
pub fn parse_bitstring(bits: &str) -> Option<usize> {
    if bits.is_empty() || bits.len() > usize::BITS as usize {
        return None;
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}

fn check_targets(num_qubits: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::QubitOutOfRange { index: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// Apply `gate` to the qubits `targets` of a raw amplitude buffer.
///
/// `targets[0]` is the most significant qubit of the gate's local index.
/// No normalization is assumed or checked, which makes this usable for
/// linearity checks on arbitrary vectors.
pub fn apply_unitary_in_place(
    amplitudes: &mut [Complex64],
    num_qubits: usize,
    gate: &UnitaryMatrix,
    targets: &[usize],
) -> Result<()> {
    if amplitudes.len() != 1usize << num_qubits {
        return Err(Error::DimensionMismatch { expected: 1usize << num_qubits, found: amplitudes.len() });
    }
    let k = targets.len();
    if k == 0 || gate.dim() != 1usize << k {
        return Err(Error::DimensionMismatch { expected: 1usize << k, found: gate.dim() });
    }
    check_targets(num_qubits, targets)?;

    let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (num_qubits - 1 - t)).collect();
    let all_targets = masks.iter().fold(0usize, |acc, m| acc | m);
    let local_dim = 1usize << k;
    // offsets[j] = global bit pattern of local index j
    let offsets: Vec<usize> = (0..local_dim)
        .map(|j| {
            (0..k).filter(|&bit| (j >> (k - 1 - bit)) & 1 == 1).fold(0usize, |acc, bit| acc | masks[bit])
        })
        .collect();

    let mut scratch = vec![ZERO; local_dim];
    for base in 0..amplitudes.len() {
        if base & all_targets != 0 {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            scratch[j] = amplitudes[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (col, v) in scratch.iter().enumerate() {
                acc += gate.get(row, col) * v;
            }
            amplitudes[base | off] = acc;
        }
    }
    Ok(())
}

/// A normalized n-qubit pure state.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The ground state |0...0>.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        let mut amplitudes = vec![ZERO; 1usize << num_qubits];
        amplitudes[0] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    /// Wrap existing amplitudes; the vector must be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: len.next_power_of_two().max(2), found: len });
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NotNormalized(f64::NAN));
        }
        let state = Self { num_qubits, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of a q0-leftmost bitstring.
    pub fn amplitude(&self, bits: &str) -> Option<Complex64> {
        if bits.len() != self.num_qubits {
            return None;
        }
        parse_bitstring(bits).map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns a new state with `gate` applied to `targets`.
    pub fn apply_gate(&self, gate: &UnitaryMatrix, targets: &[usize]) -> Result<Self> {
        let mut next = self.clone();
        next.apply_gate_mut(gate, targets)?;
        Ok(next)
    }

    pub(crate) fn apply_gate_mut(&mut self, gate: &UnitaryMatrix, targets: &[usize]) -> Result<()> {
        apply_unitary_in_place(&mut self.amplitudes, self.num_qubits, gate, targets)
    }

    /// Born-rule probabilities over all qubits.
    pub fn probabilities(&self) -> Distribution {
        Distribution {
            num_bits: self.num_qubits,
            probs: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Probabilities of the listed qubits (in ascending qubit order), others traced out.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Distribution> {
        check_targets(self.num_qubits, qubits)?;
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        Ok(self.probabilities().marginal(&sorted))
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm_sqr() > 0.0 {
                m.entry(&bitstring(i, self.num_qubits), a);
            }
        }
        m.finish()
    }
}

/// Probability distribution over q0-leftmost bitstrings of a fixed width.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    num_bits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(num_bits: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << num_bits {
            return Err(Error::DimensionMismatch { expected: 1usize << num_bits, found: probs.len() });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument("probabilities must be finite and nonnegative".into()));
        }
        Ok(Self { num_bits, probs })
    }

    /// Build from (bitstring, probability) pairs; missing keys are zero.
    pub fn from_pairs<'a, I>(num_bits: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut probs = vec![0.0; 1usize << num_bits];
        for (bits, p) in pairs {
            match parse_bitstring(bits) {
                Some(i) if bits.len() == num_bits => probs[i] += p,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bitstring `{bits}` does not have width {num_bits}"
                    )))
                }
            }
        }
        Self::new(num_bits, probs)
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, bits: &str) -> f64 {
        match parse_bitstring(bits) {
            Some(i) if bits.len() == self.num_bits => self.probs[i],
            _ => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// (bitstring, probability) pairs in index order, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(i, p)| (bitstring(i, self.num_bits), *p))
    }

    /// Keep the bit positions in `positions` (ascending), summing out the rest.
    pub fn marginal(&self, positions: &[usize]) -> Distribution {
        let n = self.num_bits;
        let m = positions.len();
        let mut probs = vec![0.0; 1usize << m];
        for (i, p) in self.probs.iter().enumerate() {
            let j = positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> (n - 1 - q)) & 1) << (m - 1 - k)));
            probs[j] += p;
        }
        Distribution { num_bits: m, probs }
    }
}

/// Square complex matrix, row-major, dimension a power of two.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    /// Build from rows without checking unitarity.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two().max(1), found: dim });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub(crate) fn from_real(dim: usize, values: &[f64]) -> Self {
        debug_assert_eq!(values.len(), dim * dim);
        Self { dim, entries: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::identity(d);
        for r in 0..d {
            for c in 0..d {
                out.entries[c * d + r] = self.get(r, c).conj();
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Kronecker product `self ⊗ rhs` (self acts on the more significant qubits).
    pub fn kron(&self, rhs: &UnitaryMatrix) -> Self {
        let d = self.dim * rhs.dim;
        let mut entries = vec![ZERO; d * d];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        entries[(r1 * rhs.dim + r2) * d + c1 * rhs.dim + c2] = a * rhs.get(r2, c2);
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|e| e * factor).collect() }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let Ok(product) = self.adjoint().matmul(self) else {
            return false;
        };
        product.max_abs_diff(&Self::identity(self.dim)).map(|d| d <= tol).unwrap_or(false)
    }

    /// Apply to a column vector.
    pub fn apply_to(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok((0..self.dim).map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum()).collect())
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UnitaryMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// True iff `a = c * b` entrywise within `tol` for some |c| = 1.
///
/// The phase is taken from the Frobenius inner product, which is the
/// least-squares optimal alignment.
pub fn equal_up_to_global_phase(a: &UnitaryMatrix, b: &UnitaryMatrix, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let inner: Complex64 = b.entries().iter().zip(a.entries()).map(|(x, y)| x.conj() * y).sum();
    if inner.norm() < f64::EPSILON {
        return Ok(a.max_abs_diff(b)? <= tol && b.entries().iter().all(|e| e.norm() <= tol));
    }
    let phase = inner / inner.norm();
    Ok(a.max_abs_diff(&b.scale(phase))? <= tol)
}

/// Global phase aligning `b` onto `a` for two vectors, or None if they are
/// not equal up to phase within `tol`.
pub fn vector_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> Option<Complex64> {
    if a.len() != b.len() {
        return None;
    }
    let inner: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    if inner.norm() < f64::EPSILON {
        return None;
    }
    let phase = inner / inner.norm();
    a.iter().zip(b).all(|(x, y)| (x - y * phase).norm() <= tol).then_some(phase)
}
