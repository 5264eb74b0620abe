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

//! Matrix definitions for the gate set.
//!
//! `U3(θ, φ, λ) = [[cos(θ/2), -e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`,
//! with `U2(φ, λ) = U3(π/2, φ, λ)` and `U1(λ) = U3(0, 0, λ)`. Under this
//! convention `Ry(θ) = U3(θ, 0, 0)` exactly while `H` and `X` match `U2(0, π)`
//! and `U3(π, 0, π)` only up to global phase.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::UnitaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Ry(f64),
    CX,
    CCX,
    Swap,
    U1(f64),
    U2(f64, f64),
    U3(f64, f64, f64),
}

impl Gate {
    /// Build a gate from its name (case-insensitive; `cnot`/`cx` and
    /// `toffoli`/`ccx` are synonyms) and parameter list.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let expected = match lower.as_str() {
            "h" | "x" | "cx" | "cnot" | "ccx" | "toffoli" | "swap" => 0,
            "ry" | "u1" => 1,
            "u2" => 2,
            "u3" => 3,
            _ => return Err(Error::UnknownGate(name.to_string())),
        };
        if params.len() != expected {
            return Err(Error::ParamCount { name: name.to_string(), expected, found: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteParam(name.to_string()));
        }
        Ok(match lower.as_str() {
            "h" => Gate::H,
            "x" => Gate::X,
            "cx" | "cnot" => Gate::CX,
            "ccx" | "toffoli" => Gate::CCX,
            "swap" => Gate::Swap,
            "ry" => Gate::Ry(params[0]),
            "u1" => Gate::U1(params[0]),
            "u2" => Gate::U2(params[0], params[1]),
            _ => Gate::U3(params[0], params[1], params[2]),
        })
    }

    /// Canonical lowercase name, as used in QASM.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H => "h",
            Gate::X => "x",
            Gate::Ry(_) => "ry",
            Gate::CX => "cx",
            Gate::CCX => "ccx",
            Gate::Swap => "swap",
            Gate::U1(_) => "u1",
            Gate::U2(..) => "u2",
            Gate::U3(..) => "u3",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Ry(t) | Gate::U1(t) => vec![t],
            Gate::U2(p, l) => vec![p, l],
            Gate::U3(t, p, l) => vec![t, p, l],
            _ => Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::CX | Gate::Swap => 2,
            Gate::CCX => 3,
            _ => 1,
        }
    }

    pub fn has_finite_params(&self) -> bool {
        self.params().iter().all(|p| p.is_finite())
    }

    /// True for the physical basis {U1, U2, U3, CX}.
    pub fn is_basis(&self) -> bool {
        matches!(self, Gate::U1(_) | Gate::U2(..) | Gate::U3(..) | Gate::CX)
    }

    pub fn matrix(&self) -> UnitaryMatrix {
        match *self {
            Gate::H => {
                UnitaryMatrix::from_real(2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
            }
            Gate::X => UnitaryMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]),
            Gate::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                UnitaryMatrix::from_real(2, &[c, -s, s, c])
            }
            Gate::CX => controlled_matrix(&Gate::X.matrix(), 1),
            Gate::CCX => controlled_matrix(&Gate::X.matrix(), 2),
            Gate::Swap => {
                let mut m = [0.0; 16];
                m[0] = 1.0;
                m[6] = 1.0;
                m[9] = 1.0;
                m[15] = 1.0;
                UnitaryMatrix::from_real(4, &m)
            }
            Gate::U1(lambda) => u3(0.0, 0.0, lambda),
            Gate::U2(phi, lambda) => u3(std::f64::consts::FRAC_PI_2, phi, lambda),
            Gate::U3(theta, phi, lambda) => u3(theta, phi, lambda),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let list: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
            write!(f, "{}({})", self.name(), list.join(", "))
        }
    }
}

fn u3(theta: f64, phi: f64, lambda: f64) -> UnitaryMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = |a: f64| Complex64::from_polar(1.0, a);
    UnitaryMatrix::from_rows(vec![
        vec![Complex64::new(c, 0.0), -e(lambda) * s],
        vec![e(phi) * s, e(phi + lambda) * c],
    ])
    .expect("2x2")
}

/// Canonical matrix for a gate.
pub fn matrix_of(gate: &Gate) -> UnitaryMatrix {
    gate.matrix()
}

fn controlled_matrix(base: &UnitaryMatrix, num_controls: usize) -> UnitaryMatrix {
    let dim = 1usize << (num_controls + 1);
    let mut m = UnitaryMatrix::identity(dim);
    let off = dim - 2;
    for r in 0..2 {
        for c in 0..2 {
            m.set(off + r, off + c, base.get(r, c));
        }
    }
    m
}

/// Embed a one-qubit gate under `num_controls` control qubits.
///
/// Controls are the most significant qubits, the target is last; the base
/// gate acts only when every control is 1.
pub fn controlled(gate: &Gate, num_controls: usize) -> Result<UnitaryMatrix> {
    if gate.arity() != 1 {
        return Err(Error::UnsupportedControl(format!(
            "base gate `{}` acts on {} qubits, need 1",
            gate.name(),
            gate.arity()
        )));
    }
    if !(1..=2).contains(&num_controls) {
        return Err(Error::UnsupportedControl(format!(
            "{num_controls} controls requested, supported: 1 or 2"
        )));
    }
    Ok(controlled_matrix(&gate.matrix(), num_controls))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{equal_up_to_global_phase, StateVector};
    use std::f64::consts::PI;

    fn all_gates() -> Vec<Gate> {
        vec![
            Gate::H,
            Gate::X,
            Gate::Ry(0.3),
            Gate::CX,
            Gate::CCX,
            Gate::Swap,
            Gate::U1(-1.1),
            Gate::U2(0.4, 2.2),
            Gate::U3(1.3, -0.7, 0.25),
        ]
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in all_gates() {
            assert!(g.matrix().is_unitary(1e-12), "{g}");
            assert_eq!(g.matrix().num_qubits(), g.arity());
        }
    }

    #[test]
    fn hadamard_entries() {
        let h = Gate::H.matrix();
        let r = FRAC_1_SQRT_2;
        assert_eq!(h.get(0, 0).re, r);
        assert_eq!(h.get(0, 1).re, r);
        assert_eq!(h.get(1, 0).re, r);
        assert_eq!(h.get(1, 1).re, -r);
    }

    #[test]
    fn ry_zero_is_identity() {
        assert_eq!(Gate::Ry(0.0).matrix(), UnitaryMatrix::identity(2));
    }

    #[test]
    fn ry_pi_flips_ground_state() {
        let m = Gate::Ry(PI).matrix();
        let expected = UnitaryMatrix::from_real(2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(m.max_abs_diff(&expected).unwrap() < 1e-15);
        let s = StateVector::new(1).unwrap().apply_gate(&m, &[0]).unwrap();
        assert!((s.amplitude("1").unwrap().re - 1.0).abs() < 1e-15);
        assert!(s.amplitude("0").unwrap().norm() < 1e-15);
    }

    #[test]
    fn ccx_swaps_110_and_111() {
        let m = Gate::CCX.matrix();
        for col in 0..8 {
            let row = match col {
                6 => 7,
                7 => 6,
                other => other,
            };
            for r in 0..8 {
                let want = if r == row { 1.0 } else { 0.0 };
                assert_eq!(m.get(r, col), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn controlled_x_matches_named_gates() {
        assert_eq!(controlled(&Gate::X, 1).unwrap(), Gate::CX.matrix());
        assert_eq!(controlled(&Gate::X, 2).unwrap(), Gate::CCX.matrix());
    }

    #[test]
    fn controlled_ry_pi_on_11() {
        let m = controlled(&Gate::Ry(PI), 1).unwrap();
        // column |11> = |1> ⊗ Ry(π)|1> = -|10>
        let col = m.column(3);
        assert!((col[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(col[3].norm() < 1e-15);
        assert!(col[0].norm() == 0.0 && col[1].norm() == 0.0);
    }

    #[test]
    fn controlled_rejects_bad_arity() {
        assert!(controlled(&Gate::CX, 1).is_err());
        assert!(controlled(&Gate::X, 0).is_err());
        assert!(controlled(&Gate::X, 3).is_err());
    }

    #[test]
    fn basis_identities() {
        let tol = 1e-12;
        assert!(equal_up_to_global_phase(&Gate::H.matrix(), &Gate::U2(0.0, PI).matrix(), tol).unwrap());
        assert!(equal_up_to_global_phase(&Gate::X.matrix(), &Gate::U3(PI, 0.0, PI).matrix(), tol).unwrap());
        for theta in [-2.0, 0.0, 0.4, PI, 5.0] {
            let d = Gate::Ry(theta).matrix().max_abs_diff(&Gate::U3(theta, 0.0, 0.0).matrix()).unwrap();
            assert!(d < tol);
        }
    }

    #[test]
    fn from_name_validation() {
        assert_eq!(Gate::from_name("CNOT", &[]).unwrap(), Gate::CX);
        assert_eq!(Gate::from_name("ry", &[0.5]).unwrap(), Gate::Ry(0.5));
        assert!(matches!(Gate::from_name("rz", &[0.1]), Err(Error::UnknownGate(_))));
        assert!(matches!(
            Gate::from_name("u2", &[0.1]),
            Err(Error::ParamCount { expected: 2, found: 1, .. })
        ));
        assert!(matches!(Gate::from_name("h", &[1.0]), Err(Error::ParamCount { .. })));
        assert!(matches!(Gate::from_name("u1", &[f64::NAN]), Err(Error::NonFiniteParam(_))));
    }

    #[test]
    fn arity_and_param_count() {
        for g in all_gates() {
            let expected_params = match g {
                Gate::Ry(_) | Gate::U1(_) => 1,
                Gate::U2(..) => 2,
                Gate::U3(..) => 3,
                _ => 0,
            };
            assert_eq!(g.params().len(), expected_params);
        }
        assert_eq!(Gate::CCX.arity(), 3);
        assert_eq!(Gate::Swap.arity(), 2);
    }
}
