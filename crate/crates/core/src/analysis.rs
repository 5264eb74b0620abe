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

//! Observables and run statistics.

use std::f64::consts::PI;

use serde::Serialize;

use crate::circuit::CountsHistogram;
use crate::error::{Error, Result};
use crate::experiments::gamma_symmetric;
use crate::state::Distribution;

const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// Which outcome counts as an interaction-free detection.
///
/// The single Mach-Zehnder tester detects on `10` and discards `00`.
/// A multi-stage `Ry` chain sends the undisturbed photon to `1`, so it
/// detects on `0…0` and discards `10…0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaLabeling {
    SingleStage,
    MultiStage,
}

impl EtaLabeling {
    /// (detection index, excluded index) for `num_bits` outcome bits.
    fn indices(self, num_bits: usize) -> (usize, usize) {
        let top = 1usize << (num_bits - 1);
        match self {
            EtaLabeling::SingleStage => (top, 0),
            EtaLabeling::MultiStage => (0, top),
        }
    }
}

/// `P(detect) / (1 − P(excluded))` on an outcome distribution.
pub fn eta_from_distribution(dist: &Distribution, labeling: EtaLabeling) -> Result<f64> {
    if dist.num_bits() < 2 {
        return Err(Error::InvalidArgument("efficiency needs at least 2 outcome bits".into()));
    }
    let (det, excl) = labeling.indices(dist.num_bits());
    let total = dist.total();
    let p = dist.as_slice();
    let denominator = total - p[excl];
    if denominator < DEGENERATE_DENOMINATOR {
        return Err(Error::Degenerate("no outcomes outside the excluded state".into()));
    }
    Ok(p[det] / denominator)
}

pub fn eta_from_counts(counts: &CountsHistogram, labeling: EtaLabeling) -> Result<f64> {
    if counts.shots() == 0 {
        return Err(Error::ZeroShots);
    }
    eta_from_distribution(&counts.to_distribution(), labeling)
}

/// Drop outcomes with the marker qubit (q2) set and return the
/// renormalized probability of `000`.
pub fn gamma_from_distribution(dist: &Distribution) -> Result<f64> {
    if dist.num_bits() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: dist.num_bits() });
    }
    let p = dist.as_slice();
    let kept: f64 = (0..8).filter(|i| i & 1 == 0).map(|i| p[i]).sum();
    if kept < DEGENERATE_DENOMINATOR {
        return Err(Error::Degenerate("every outcome was rejected by post-selection".into()));
    }
    Ok(p[0] / kept)
}

pub fn gamma_from_counts(counts: &CountsHistogram) -> Result<f64> {
    if counts.shots() == 0 {
        return Err(Error::ZeroShots);
    }
    gamma_from_distribution(&counts.to_distribution())
}

/// Surviving outcomes after discarding the marker qubit set, renormalized.
pub fn post_select_q2_zero(dist: &Distribution) -> Result<Distribution> {
    if dist.num_bits() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: dist.num_bits() });
    }
    let p = dist.as_slice();
    let kept: f64 = (0..8).filter(|i| i & 1 == 0).map(|i| p[i]).sum();
    if kept < DEGENERATE_DENOMINATOR {
        return Err(Error::Degenerate("every outcome was rejected by post-selection".into()));
    }
    let survivors = (0..8).map(|i| if i & 1 == 0 { p[i] / kept } else { 0.0 }).collect();
    Distribution::new(3, survivors)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunStatistics {
    pub mean: f64,
    /// Population standard deviation (divides by `n`).
    pub std_dev: f64,
    pub absolute_error: f64,
    pub relative_error: f64,
    pub n_runs: usize,
}

pub fn run_statistics(values: &[f64], reference: f64) -> Result<RunStatistics> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("no runs to summarize".into()));
    }
    if reference == 0.0 {
        return Err(Error::InvalidArgument("relative error needs a nonzero reference".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let absolute_error = (mean - reference).abs();
    Ok(RunStatistics {
        mean,
        std_dev: var.sqrt(),
        absolute_error,
        relative_error: absolute_error / reference.abs(),
        n_runs: values.len(),
    })
}

/// Grid search of the symmetric nonlocal probability over `k·step ∈ (0, π)`.
pub fn argmax_gamma(step: f64) -> Result<(f64, f64)> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut k = 1u64;
    loop {
        let theta = k as f64 * step;
        if theta >= PI - 1e-12 {
            break;
        }
        let g = gamma_symmetric(theta);
        if g > best.1 {
            best = (theta, g);
        }
        k += 1;
    }
    if best.1 == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument("step leaves no interior grid point".into()));
    }
    Ok(best)
}

/// Half the L1 distance between two distributions over the same bits.
pub fn total_variation(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.num_bits() != b.num_bits() {
        return Err(Error::DimensionMismatch { expected: a.num_bits(), found: b.num_bits() });
    }
    Ok(0.5 * a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// Per-outcome binomial standard error `√(p(1−p)/shots)`.
pub fn binomial_standard_error(p: f64, shots: u64) -> f64 {
    if shots == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / shots as f64).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_single_stage_eta() {
        let c = CountsHistogram::from_counts(2, [("00", 2048), ("01", 2048), ("10", 2048), ("11", 2048)])
            .unwrap();
        assert!((eta_from_counts(&c, EtaLabeling::SingleStage).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_multi_stage_eta() {
        let c = CountsHistogram::from_counts(3, [("000", 100)]).unwrap();
        assert_eq!(eta_from_counts(&c, EtaLabeling::MultiStage).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_eta() {
        let c = CountsHistogram::from_counts(2, [("00", 10)]).unwrap();
        assert!(matches!(eta_from_counts(&c, EtaLabeling::SingleStage), Err(Error::Degenerate(_))));
    }

    #[test]
    fn gamma_post_selection() {
        let c = CountsHistogram::from_counts(3, [("000", 100), ("110", 900)]).unwrap();
        assert!((gamma_from_counts(&c).unwrap() - 0.1).abs() < 1e-12);
        let rejected = CountsHistogram::from_counts(3, [("001", 500), ("111", 500)]).unwrap();
        assert!(gamma_from_counts(&rejected).is_err());
    }

    #[test]
    fn post_selected_sums_to_one() {
        let d = Distribution::new(3, vec![0.1, 0.2, 0.05, 0.05, 0.3, 0.1, 0.1, 0.1]).unwrap();
        let s = post_select_q2_zero(&d).unwrap();
        assert!((s.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn statistics_hand_values() {
        let s = run_statistics(&[0.3, 0.4], 1.0 / 3.0).unwrap();
        assert!((s.mean - 0.35).abs() < 1e-12);
        assert!((s.std_dev - 0.05).abs() < 1e-12);
        assert!((s.absolute_error - 1.0 / 60.0).abs() < 1e-12);
        assert!((s.relative_error - s.absolute_error * 3.0).abs() < 1e-12);
        let z = run_statistics(&[0.5], 0.5).unwrap();
        assert_eq!((z.std_dev, z.absolute_error, z.relative_error), (0.0, 0.0, 0.0));
        assert!(run_statistics(&[], 1.0).is_err());
        assert!(run_statistics(&[1.0], 0.0).is_err());
    }

    #[test]
    fn coarse_argmax() {
        let (theta, g) = argmax_gamma(PI / 4.0).unwrap();
        assert!((theta - PI / 2.0).abs() < 1e-12);
        assert!((g - 1.0 / 12.0).abs() < 1e-12);
        assert!(argmax_gamma(0.0).is_err());
    }

    #[test]
    fn tv_distance() {
        let a = Distribution::new(1, vec![1.0, 0.0]).unwrap();
        let b = Distribution::new(1, vec![0.25, 0.75]).unwrap();
        assert!((total_variation(&a, &b).unwrap() - 0.75).abs() < 1e-15);
    }
}
