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

//! Readout-error mitigation with a full calibration (confusion) matrix.
//!
//! Entry `(i, j)` of the matrix is `P(measure i | prepared j)` over
//! q0-leftmost bitstrings. Mitigation solves
//! `min ||M x - p||_2` subject to `x >= 0`, `sum(x) = 1`, so the result is
//! always a valid distribution even where plain inversion goes negative.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CountsHistogram};
use crate::error::{Error, Result};
use crate::noise::{simulate_noisy, DeviceModel, RandomSeed, ReadoutError};
use crate::state::Distribution;

pub const MAX_MITIGATION_QUBITS: usize = 5;
/// Condition number above which a matrix is refused.
pub const MAX_CONDITION: f64 = 1e8;
const SOLVER_TOL: f64 = 1e-10;
const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    n: usize,
    /// Row-major, `2^n x 2^n`.
    entries: Vec<f64>,
}

impl ConfusionMatrix {
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        let m = Self { n, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_MITIGATION_QUBITS {
            return Err(Error::MitigationTooLarge(self.n));
        }
        let d = self.dim();
        if self.entries.len() != d * d {
            return Err(Error::InvalidConfusion(format!(
                "expected {} entries, found {}",
                d * d,
                self.entries.len()
            )));
        }
        if self.entries.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidConfusion("entries must lie in [0, 1]".into()));
        }
        for j in 0..d {
            let s: f64 = (0..d).map(|i| self.get(i, j)).sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidConfusion(format!("column {j} sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let d = 1usize << n;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        Self::from_entries(n, entries)
    }

    /// Analytic matrix for independent per-bit readout errors
    /// (`readout[k]` acts on bit k); the infinite-shot limit of
    /// [`build_confusion_matrix`].
    pub fn from_readout(readout: &[ReadoutError]) -> Result<Self> {
        let n = readout.len();
        if n == 0 || n > MAX_MITIGATION_QUBITS {
            return Err(Error::MitigationTooLarge(n));
        }
        let d = 1usize << n;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = readout.iter().enumerate().fold(1.0, |acc, (k, r)| {
                    let shift = n - 1 - k;
                    let (mi, pj) = ((i >> shift) & 1, (j >> shift) & 1);
                    acc * match (pj, mi) {
                        (0, 0) => 1.0 - r.p01,
                        (0, _) => r.p01,
                        (_, 0) => r.p10,
                        _ => 1.0 - r.p10,
                    }
                });
            }
        }
        Self::from_entries(n, entries)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.entries)
    }

    /// `M x` for a distribution over the same bits.
    pub fn apply(&self, dist: &Distribution) -> Result<Distribution> {
        if dist.num_bits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: dist.num_bits() });
        }
        let x = DVector::from_column_slice(dist.as_slice());
        let y = self.to_matrix() * x;
        Distribution::new(self.n, y.iter().map(|v| v.max(0.0)).collect())
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        let sv = self.to_matrix().singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: ConfusionMatrix = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfusion(format!("malformed document: {e}")))?;
        m.validate()?;
        Ok(m)
    }
}

/// Estimate the confusion matrix by preparing every basis state of the
/// first `n` device qubits (X on the 1-bits) and sampling it `shots` times
/// under the device's readout noise. Column `j` uses seed `seed.derive(j)`.
pub fn build_confusion_matrix(
    device: &DeviceModel,
    n: usize,
    shots: u64,
    seed: RandomSeed,
) -> Result<ConfusionMatrix> {
    if n == 0 || n > MAX_MITIGATION_QUBITS {
        return Err(Error::MitigationTooLarge(n));
    }
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut readout_only = device.clone();
    readout_only.single_qubit_error = 0.0;
    readout_only.cnot_error = 0.0;

    let d = 1usize << n;
    let mut entries = vec![0.0; d * d];
    for j in 0..d {
        let mut prep = Circuit::new(format!("cal_{j}"), n, n);
        for q in 0..n {
            if (j >> (n - 1 - q)) & 1 == 1 {
                prep.x(q)?;
            }
        }
        prep.measure_all()?;
        let counts = simulate_noisy(&prep, &readout_only, shots, seed.derive(j as u64))?;
        let column = counts.to_distribution();
        for (i, p) in column.as_slice().iter().enumerate() {
            entries[i * d + j] = *p;
        }
    }
    ConfusionMatrix::from_entries(n, entries)
}

/// Mitigate empirical counts.
pub fn mitigate(counts: &CountsHistogram, m: &ConfusionMatrix) -> Result<Distribution> {
    mitigate_distribution(&counts.to_distribution(), m)
}

/// Constrained least-squares inversion of `m` applied to `noisy`.
pub fn mitigate_distribution(noisy: &Distribution, m: &ConfusionMatrix) -> Result<Distribution> {
    if noisy.num_bits() != m.n {
        return Err(Error::DimensionMismatch { expected: m.n, found: noisy.num_bits() });
    }
    let cond = m.condition_number();
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let a = m.to_matrix();
    let p = DVector::from_column_slice(noisy.as_slice());

    if let Some(x) = a.clone().lu().solve(&p) {
        if x.iter().all(|v| *v >= -SOLVER_TOL) {
            let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
            return normalized(m.n, clipped);
        }
    }
    let x = simplex_least_squares(&a, &p)?;
    normalized(m.n, x)
}

fn normalized(n: usize, mut x: Vec<f64>) -> Result<Distribution> {
    let s: f64 = x.iter().sum();
    if s <= 0.0 {
        return Err(Error::Degenerate("mitigated distribution has zero mass".into()));
    }
    x.iter_mut().for_each(|v| *v /= s);
    Distribution::new(n, x)
}

/// Primal active-set method for `min 1/2 x'Qx - c'x` on the probability
/// simplex, with `Q = A'A`, `c = A'p`.
fn simplex_least_squares(a: &DMatrix<f64>, p: &DVector<f64>) -> Result<Vec<f64>> {
    let d = a.ncols();
    let q = a.transpose() * a;
    let c = a.transpose() * p;

    let mut x = vec![1.0 / d as f64; d];
    let mut active = vec![false; d];

    for _ in 0..(50 * d + 100) {
        let free: Vec<usize> = (0..d).filter(|&i| !active[i]).collect();
        let f = free.len();
        // KKT system of the equality-constrained subproblem on the free set
        let mut kkt = DMatrix::<f64>::zeros(f + 1, f + 1);
        let mut rhs = DVector::<f64>::zeros(f + 1);
        for (r, &i) in free.iter().enumerate() {
            for (s, &j) in free.iter().enumerate() {
                kkt[(r, s)] = q[(i, j)];
            }
            kkt[(r, f)] = 1.0;
            kkt[(f, r)] = 1.0;
            rhs[r] = c[i];
        }
        rhs[f] = 1.0;
        let sol = kkt.lu().solve(&rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
        let z: Vec<f64> = sol.iter().take(f).copied().collect();
        let nu = sol[f];

        if z.iter().all(|v| *v >= -SOLVER_TOL) {
            for (k, &i) in free.iter().enumerate() {
                x[i] = z[k].max(0.0);
            }
            let xv = DVector::from_column_slice(&x);
            let grad = &q * &xv - &c;
            let worst =
                (0..d).filter(|&i| active[i]).map(|i| (i, grad[i] + nu)).min_by(|a, b| a.1.total_cmp(&b.1));
            match worst {
                Some((i, lambda)) if lambda < -SOLVER_TOL => active[i] = false,
                _ => return Ok(x),
            }
        } else {
            let mut alpha = 1.0;
            for (k, &i) in free.iter().enumerate() {
                if z[k] < 0.0 {
                    let step = x[i] / (x[i] - z[k]);
                    alpha = f64::min(alpha, step);
                }
            }
            for (k, &i) in free.iter().enumerate() {
                x[i] += alpha * (z[k] - x[i]);
                if x[i] <= SOLVER_TOL * 1e-2 {
                    x[i] = 0.0;
                    active[i] = true;
                }
            }
        }
    }
    Err(Error::Degenerate("constrained least squares did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::total_variation;

    #[test]
    fn noiseless_device_gives_identity() {
        let dev = DeviceModel::noiseless(3);
        for n in 1..=3 {
            let m = build_confusion_matrix(&dev, n, 500, RandomSeed(1)).unwrap();
            assert_eq!(m, ConfusionMatrix::identity(n).unwrap());
        }
    }

    #[test]
    fn symmetric_flip_analytic_matrix() {
        let m = ConfusionMatrix::from_readout(&[ReadoutError::symmetric(0.05)]).unwrap();
        assert!((m.get(0, 0) - 0.95).abs() < 1e-15);
        assert!((m.get(1, 0) - 0.05).abs() < 1e-15);
        assert!((m.get(0, 1) - 0.05).abs() < 1e-15);
        assert!((m.get(1, 1) - 0.95).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_matrix_is_tensor_product() {
        let r = ReadoutError::symmetric(0.05);
        let one = ConfusionMatrix::from_readout(&[r]).unwrap();
        let two = ConfusionMatrix::from_readout(&[r, r]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = one.get(i >> 1, j >> 1) * one.get(i & 1, j & 1);
                assert!((two.get(i, j) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn empirical_matrix_approaches_analytic() {
        let dev = DeviceModel::noiseless(2).with_uniform_readout(ReadoutError::symmetric(0.05));
        let emp = build_confusion_matrix(&dev, 2, 100_000, RandomSeed(3)).unwrap();
        let exact = ConfusionMatrix::from_readout(&[ReadoutError::symmetric(0.05); 2]).unwrap();
        for (a, b) in emp.entries().iter().zip(exact.entries()) {
            assert!((a - b).abs() < 0.004, "{a} vs {b}");
        }
    }

    #[test]
    fn identity_mitigation_is_passthrough() {
        let counts = CountsHistogram::from_counts(2, [("00", 30u64), ("01", 10), ("11", 60)]).unwrap();
        let m = ConfusionMatrix::identity(2).unwrap();
        let out = mitigate(&counts, &m).unwrap();
        assert_eq!(out, counts.to_distribution());
    }

    #[test]
    fn exact_inversion_one_qubit() {
        let m = ConfusionMatrix::from_readout(&[ReadoutError::symmetric(0.05)]).unwrap();
        let truth = Distribution::from_pairs(1, [("0", 1.0)]).unwrap();
        let noisy = m.apply(&truth).unwrap();
        let out = mitigate_distribution(&noisy, &m).unwrap();
        assert!((out.get("0") - 1.0).abs() < 1e-9);
        assert!(out.get("1").abs() < 1e-9);
    }

    #[test]
    fn constrained_solution_stays_physical() {
        // an observation that no nonnegative x can explain exactly
        let m = ConfusionMatrix::from_readout(&[ReadoutError::symmetric(0.1); 2]).unwrap();
        let noisy = Distribution::from_pairs(2, [("00", 1.0)]).unwrap();
        let out = mitigate_distribution(&noisy, &m).unwrap();
        assert!(out.as_slice().iter().all(|p| *p >= 0.0));
        assert!((out.total() - 1.0).abs() < 1e-9);
        assert!((out.get("00") - 1.0).abs() < 1e-9, "{out:?}");
    }

    #[test]
    fn constrained_matches_brute_force_on_simplex() {
        // 1-qubit case: minimize over x = (t, 1-t), t in [0,1], by grid search
        let m = ConfusionMatrix::from_readout(&[ReadoutError { p01: 0.2, p10: 0.1 }]).unwrap();
        let noisy = Distribution::from_pairs(1, [("0", 0.05), ("1", 0.95)]).unwrap();
        let out = mitigate_distribution(&noisy, &m).unwrap();
        let resid = |t: f64| {
            let y0 = m.get(0, 0) * t + m.get(0, 1) * (1.0 - t);
            let y1 = m.get(1, 0) * t + m.get(1, 1) * (1.0 - t);
            (y0 - 0.05).powi(2) + (y1 - 0.95).powi(2)
        };
        let best = (0..=100_000)
            .map(|k| k as f64 / 100_000.0)
            .min_by(|a, b| resid(*a).total_cmp(&resid(*b)))
            .unwrap();
        assert!((out.get("0") - best).abs() < 1e-4, "{} vs {best}", out.get("0"));
    }

    #[test]
    fn ill_conditioned_rejected() {
        let m = ConfusionMatrix::from_entries(1, vec![0.5, 0.5, 0.5, 0.5]).unwrap();
        let d = Distribution::from_pairs(1, [("0", 1.0)]).unwrap();
        assert!(matches!(mitigate_distribution(&d, &m), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn dimension_and_size_errors() {
        let m = ConfusionMatrix::identity(2).unwrap();
        let d = Distribution::from_pairs(1, [("0", 1.0)]).unwrap();
        assert!(matches!(mitigate_distribution(&d, &m), Err(Error::DimensionMismatch { .. })));
        let dev = DeviceModel::noiseless(6);
        assert_eq!(
            build_confusion_matrix(&dev, 6, 10, RandomSeed(0)).unwrap_err(),
            Error::MitigationTooLarge(6)
        );
        assert!(ConfusionMatrix::from_entries(1, vec![0.9, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ConfusionMatrix::from_readout(&[ReadoutError { p01: 0.02, p10: 0.04 }; 2]).unwrap();
        assert_eq!(ConfusionMatrix::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn mitigation_reduces_tv_on_exact_input() {
        let m = ConfusionMatrix::from_readout(&[ReadoutError::symmetric(0.03); 2]).unwrap();
        let truth = Distribution::from_pairs(2, [("00", 0.5), ("11", 0.5)]).unwrap();
        let noisy = m.apply(&truth).unwrap();
        let out = mitigate_distribution(&noisy, &m).unwrap();
        assert!(total_variation(&out, &truth).unwrap() < total_variation(&noisy, &truth).unwrap());
        assert!(total_variation(&out, &truth).unwrap() < 1e-9);
    }
}
