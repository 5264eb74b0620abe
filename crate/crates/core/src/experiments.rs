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

//! Circuit builders for the interferometer experiments and their
//! closed-form oracles.
//!
//! Qubit 0 is always the photon (or the first particle); measurement
//! bitstrings list qubit 0 first.
//!
//! Terminology: `N` counts beamsplitters, which equals the number of `Ry`
//! gates and the total qubit count of the multi-stage bomb circuit. An
//! `N`-beamsplitter chain has `N - 1` bomb stages.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analysis::EtaLabeling;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::state::{Distribution, CIRCUIT_TOL};

/// Beamsplitter angles `θ₁…θ_N` in radians.
///
/// Construction checks that the angles are finite and sum to π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AngleVector {
    thetas: Vec<f64>,
}

impl AngleVector {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidArgument("angle vector is empty".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("angle vector has a non-finite entry".into()));
        }
        let sum: f64 = thetas.iter().sum();
        if (sum - PI).abs() > CIRCUIT_TOL {
            return Err(Error::AngleSum(sum));
        }
        Ok(Self { thetas })
    }

    /// All `N` angles equal to `π/N`.
    pub fn equal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 beamsplitters, got {n}")));
        }
        Self::new(vec![PI / n as f64; n])
    }

    /// `θ_N = θ` with the remaining angles sharing `π − θ` equally.
    pub fn split(n: usize, theta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 beamsplitters, got {n}")));
        }
        let rest = (PI - theta) / (n - 1) as f64;
        let mut thetas = vec![rest; n - 1];
        thetas.push(theta);
        Self::new(thetas)
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.thetas
    }
}

impl TryFrom<Vec<f64>> for AngleVector {
    type Error = Error;

    fn try_from(thetas: Vec<f64>) -> Result<Self> {
        Self::new(thetas)
    }
}

impl From<AngleVector> for Vec<f64> {
    fn from(v: AngleVector) -> Self {
        v.thetas
    }
}

/// Which figure of merit an experiment reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Pattern distribution only.
    None,
    Eta(EtaLabeling),
    Gamma,
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::None => "distribution",
            Observable::Eta(_) => "eta",
            Observable::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    Eraser { erase: bool },
    Bomb { present: bool },
    GeneralBomb { thetas: AngleVector },
    Hardy { theta0: f64, theta1: f64 },
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::Eraser { .. } => "eraser",
            ExperimentSpec::Bomb { .. } => "bomb",
            ExperimentSpec::GeneralBomb { .. } => "general_bomb",
            ExperimentSpec::Hardy { .. } => "hardy",
        }
    }

    pub fn build(&self) -> Result<Circuit> {
        match self {
            ExperimentSpec::Eraser { erase } => Ok(build_eraser(*erase)),
            ExperimentSpec::Bomb { present } => Ok(build_bomb(*present)),
            ExperimentSpec::GeneralBomb { thetas } => build_general_bomb(thetas),
            ExperimentSpec::Hardy { theta0, theta1 } => build_hardy(*theta0, *theta1),
        }
    }

    pub fn observable(&self) -> Observable {
        match self {
            ExperimentSpec::Eraser { .. } => Observable::None,
            ExperimentSpec::Bomb { present: true } => Observable::Eta(EtaLabeling::SingleStage),
            ExperimentSpec::Bomb { present: false } => Observable::None,
            ExperimentSpec::GeneralBomb { .. } => Observable::Eta(EtaLabeling::MultiStage),
            ExperimentSpec::Hardy { .. } => Observable::Gamma,
        }
    }

    /// Closed-form value of the observable, if the experiment has one.
    pub fn theory_value(&self) -> Result<Option<f64>> {
        Ok(match self {
            ExperimentSpec::Bomb { present: true } => Some(1.0 / 3.0),
            ExperimentSpec::GeneralBomb { thetas } => Some(eta_general(thetas)?),
            ExperimentSpec::Hardy { theta0, theta1 } => Some(gamma_closed(*theta0, *theta1)),
            _ => None,
        })
    }

    /// Closed-form outcome distribution, where one is known.
    pub fn theory_distribution(&self) -> Result<Option<Distribution>> {
        match self {
            ExperimentSpec::Eraser { erase: false } => Distribution::new(2, vec![0.25; 4]).map(Some),
            ExperimentSpec::Eraser { erase: true } => {
                Distribution::new(2, vec![0.5, 0.0, 0.0, 0.5]).map(Some)
            }
            ExperimentSpec::Bomb { present: true } => Distribution::new(2, vec![0.25; 4]).map(Some),
            ExperimentSpec::Bomb { present: false } => {
                Distribution::new(2, vec![1.0, 0.0, 0.0, 0.0]).map(Some)
            }
            ExperimentSpec::GeneralBomb { .. } => Ok(None),
            ExperimentSpec::Hardy { theta0, theta1 } => {
                let probs = hardy_amplitudes(*theta0, *theta1).iter().map(|a| a * a).collect();
                Distribution::new(3, probs).map(Some)
            }
        }
    }
}

/// Quantum eraser. Without erasure the idler carries which-path
/// information and all four outcomes are equally likely.
pub fn build_eraser(erase: bool) -> Circuit {
    let name = if erase { "eraser_erase" } else { "eraser_which_path" };
    let mut c = Circuit::new(name, 2, 2);
    c.h(0).and_then(|c| c.cx(0, 1)).and_then(|c| c.h(0)).expect("static circuit");
    if erase {
        c.h(1).expect("static circuit");
    }
    c.measure_all().expect("static circuit");
    c
}

/// Single Mach-Zehnder bomb tester; qubit 1 flips when the bomb absorbs
/// the photon.
pub fn build_bomb(bomb_present: bool) -> Circuit {
    let name = if bomb_present { "bomb_present" } else { "bomb_absent" };
    let mut c = Circuit::new(name, 2, 2);
    c.h(0).expect("static circuit");
    if bomb_present {
        c.cx(0, 1).expect("static circuit");
    }
    c.h(0).and_then(|c| c.measure_all()).expect("static circuit");
    c
}

/// Multi-beamsplitter bomb tester with one probe qubit per stage.
pub fn build_general_bomb(angles: &AngleVector) -> Result<Circuit> {
    let n = angles.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 beamsplitters, got {n}")));
    }
    let thetas = angles.as_slice();
    let mut c = Circuit::new(format!("general_bomb_n{n}"), n, n);
    c.ry(thetas[0], 0)?;
    for (i, &theta) in thetas.iter().enumerate().skip(1) {
        c.cx(0, i)?;
        c.ry(theta, 0)?;
    }
    c.measure_all()?;
    Ok(c)
}

/// Two interlocked interferometers; the Toffoli target marks annihilation.
pub fn build_hardy(theta0: f64, theta1: f64) -> Result<Circuit> {
    for &t in &[theta0, theta1] {
        if !t.is_finite() || !(-CIRCUIT_TOL..=PI + CIRCUIT_TOL).contains(&t) {
            return Err(Error::AngleOutOfRange(t));
        }
    }
    let mut c = Circuit::new("hardy", 3, 3);
    c.ry(theta0, 0)?.ry(theta1, 1)?.ccx(0, 1, 2)?;
    c.ry(PI - theta0, 0)?.ry(PI - theta1, 1)?.measure_all()?;
    Ok(c)
}

/// Real amplitudes of the ideal Hardy output state, indexed with qubit 0
/// as the most significant bit.
pub fn hardy_amplitudes(theta0: f64, theta1: f64) -> [f64; 8] {
    let (s0, s1) = (theta0.sin(), theta1.sin());
    let h0 = (theta0 / 2.0).sin().powi(2);
    let h1 = (theta1 / 2.0).sin().powi(2);
    [
        -0.25 * s1 * s0,
        0.25 * s1 * s0,
        0.5 * h1 * s0,
        -0.5 * h1 * s0,
        0.5 * s1 * h0,
        -0.5 * h0 * s1,
        0.25 * (2.0 * theta1.cos() * h0 + theta0.cos() + 3.0),
        h1 * h0,
    ]
}

/// Efficiency of `N` equal beamsplitters.
pub fn eta_equal_bs(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 beamsplitters, got {n}")));
    }
    let half = PI / (2.0 * n as f64);
    let c2 = half.cos().powi(2);
    Ok(c2.powi(n as i32) / (1.0 - half.sin().powi(2) * c2.powi(n as i32 - 1)))
}

/// Efficiency for arbitrary angles: `P(0…0) / (1 − P(10…0))`.
pub fn eta_general(angles: &AngleVector) -> Result<f64> {
    let thetas = angles.as_slice();
    let n = thetas.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 beamsplitters, got {n}")));
    }
    let head: f64 = thetas[..n - 1].iter().map(|t| (t / 2.0).cos().powi(2)).product();
    let last = thetas[n - 1] / 2.0;
    let numerator = head * last.cos().powi(2);
    let denominator = 1.0 - last.sin().powi(2) * head;
    if denominator < 1e-15 {
        return Err(Error::Degenerate("every run ends in the excluded outcome".into()));
    }
    Ok(numerator / denominator)
}

/// Post-selected probability of the nonlocal outcome `000`.
pub fn gamma_closed(theta0: f64, theta1: f64) -> f64 {
    let numerator = theta1.sin().powi(2) * theta0.sin().powi(2);
    let denominator = 4.0 * (2.0 * theta1.cos() * (theta0 / 2.0).sin().powi(2) + theta0.cos() + 3.0);
    if denominator.abs() < 1e-300 {
        return 0.0;
    }
    numerator / denominator
}

/// Symmetric setting `θ₀ = θ₁ = θ`.
pub fn gamma_symmetric(theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    let c = (theta / 2.0).cos();
    2.0 * s.powi(4) * c * c / (3.0 - theta.cos())
}

/// Nonlocal probability in the amplitude parametrization `(α, β)`.
pub fn gamma_from_alpha_beta(alpha: f64, beta: f64) -> Result<f64> {
    let ab = (alpha * beta).abs();
    if ab.is_nan() || ab >= 1.0 {
        return Err(Error::InvalidArgument(format!("|alpha*beta| = {ab} must be below 1")));
    }
    let value = ab * (alpha.abs() - beta.abs()) / (1.0 - ab);
    Ok(value * value)
}

/// Non-negative `(α, β)` with `sin(θ/2) = √(αβ)/√(1−αβ)` and
/// `cos(θ/2) = (α − β)/√(1−αβ)`.
pub fn alpha_beta_from_theta(theta: f64) -> (f64, f64) {
    let s = (theta / 2.0).sin().powi(2);
    let product = s / (1.0 + s);
    let difference = (theta / 2.0).cos() * (1.0 - product).sqrt();
    let alpha = 0.5 * (difference + (difference * difference + 4.0 * product).sqrt());
    (alpha, alpha - difference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate_ideal;

    fn probs(c: &Circuit) -> Vec<f64> {
        simulate_ideal(c).unwrap().probabilities().as_slice().to_vec()
    }

    #[test]
    fn eraser_patterns() {
        for p in probs(&build_eraser(false)) {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let erased = probs(&build_eraser(true));
        for (p, e) in erased.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((p - e).abs() < 1e-12);
        }
    }

    #[test]
    fn bomb_patterns() {
        for p in probs(&build_bomb(true)) {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!((probs(&build_bomb(false))[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_stage_general_bomb_matches_single_bomb() {
        let c = build_general_bomb(&AngleVector::equal(2).unwrap()).unwrap();
        for p in probs(&c) {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn five_stage_product_amplitudes() {
        let c = build_general_bomb(&AngleVector::equal(5).unwrap()).unwrap();
        let p = probs(&c);
        let half = PI / 10.0;
        assert!((p[0] - half.cos().powi(10)).abs() < 1e-10);
        assert!((p[16] - half.sin().powi(2) * half.cos().powi(8)).abs() < 1e-10);
    }

    #[test]
    fn unequal_three_stage_product() {
        let v = AngleVector::new(vec![PI / 4.0, PI / 4.0, PI / 2.0]).unwrap();
        let p = probs(&build_general_bomb(&v).unwrap());
        let expect: f64 = v.as_slice().iter().map(|t| (t / 2.0).cos().powi(2)).product();
        assert!((p[0] - expect).abs() < 1e-10);
    }

    #[test]
    fn angle_sum_enforced() {
        assert!(matches!(AngleVector::new(vec![1.0, 1.0]), Err(Error::AngleSum(_))));
        assert!(AngleVector::new(vec![PI / 2.0, PI / 2.0 + 5e-10]).is_ok());
        assert!(build_general_bomb(&AngleVector::new(vec![PI]).unwrap()).is_err());
    }

    #[test]
    fn hardy_limits() {
        let z = simulate_ideal(&build_hardy(0.0, 0.0).unwrap()).unwrap();
        assert!((z.amplitude("110").unwrap().re - 1.0).abs() < 1e-12);
        let half = simulate_ideal(&build_hardy(PI / 2.0, PI / 2.0).unwrap()).unwrap();
        assert!((half.amplitude("000").unwrap().re + 0.25).abs() < 1e-12);
        assert!(matches!(build_hardy(-0.1, 0.0), Err(Error::AngleOutOfRange(_))));
        assert!(build_hardy(PI, PI).is_ok());
    }

    #[test]
    fn hardy_amplitude_table_matches_circuit() {
        for &(t0, t1) in &[(0.3, 1.1), (2.0, 0.7), (PI / 3.0, 2.5)] {
            let state = simulate_ideal(&build_hardy(t0, t1).unwrap()).unwrap();
            for (a, e) in state.amplitudes().iter().zip(hardy_amplitudes(t0, t1)) {
                assert!((a.re - e).abs() < 1e-10 && a.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_equal_values() {
        assert!((eta_equal_bs(2).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((eta_equal_bs(10).unwrap() - 0.79613).abs() < 1e-4);
        assert!(eta_equal_bs(100).unwrap() > 0.97);
        assert!(eta_equal_bs(1).is_err());
    }

    #[test]
    fn eta_general_reduces_to_equal() {
        for n in 2..=12 {
            let g = eta_general(&AngleVector::equal(n).unwrap()).unwrap();
            assert!((g - eta_equal_bs(n).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_forms_agree() {
        assert!((gamma_closed(PI / 2.0, PI / 2.0) - 1.0 / 12.0).abs() < 1e-12);
        for k in 1..100 {
            let t = PI * k as f64 / 100.0;
            assert!((gamma_closed(t, t) - gamma_symmetric(t)).abs() < 1e-12);
            let (a, b) = alpha_beta_from_theta(t);
            assert!((gamma_from_alpha_beta(a, b).unwrap() - gamma_symmetric(t)).abs() < 1e-9);
        }
        assert_eq!(gamma_closed(PI, PI), 0.0);
    }

    #[test]
    fn alpha_beta_trivial_cases() {
        assert_eq!(gamma_from_alpha_beta(0.4, 0.4).unwrap(), 0.0);
        assert_eq!(gamma_from_alpha_beta(0.7, 0.0).unwrap(), 0.0);
        assert!(gamma_from_alpha_beta(2.0, 0.6).is_err());
    }

    #[test]
    fn spec_serde_round_trip() {
        let spec = ExperimentSpec::GeneralBomb { thetas: AngleVector::equal(3).unwrap() };
        let json = serde_json::to_string(&spec).unwrap();
        let back: ExperimentSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let bad = r#"{"kind":"general_bomb","thetas":[1.0,1.0]}"#;
        assert!(serde_json::from_str::<ExperimentSpec>(bad).is_err());
    }
}
