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

//! Rewriting into the {U1, U2, U3, CX} basis.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::circuit::{Circuit, Instruction};
use crate::error::Result;
use crate::gates::Gate;
use crate::state::UnitaryMatrix;

const H_BASIS: Gate = Gate::U2(0.0, PI);
const T: Gate = Gate::U1(FRAC_PI_4);
const TDG: Gate = Gate::U1(-FRAC_PI_4);

/// Basis gates for one gate; equal to the input up to global phase.
pub fn decompose_gate(gate: &Gate, qubits: &[usize]) -> Vec<(Gate, Vec<usize>)> {
    match *gate {
        Gate::H => vec![(H_BASIS, qubits.to_vec())],
        Gate::X => vec![(Gate::U3(PI, 0.0, PI), qubits.to_vec())],
        Gate::Ry(theta) => vec![(Gate::U3(theta, 0.0, 0.0), qubits.to_vec())],
        Gate::CX | Gate::U1(_) | Gate::U2(..) | Gate::U3(..) => vec![(*gate, qubits.to_vec())],
        Gate::Swap => {
            let (a, b) = (qubits[0], qubits[1]);
            vec![(Gate::CX, vec![a, b]), (Gate::CX, vec![b, a]), (Gate::CX, vec![a, b])]
        }
        Gate::CCX => {
            let (a, b, c) = (qubits[0], qubits[1], qubits[2]);
            vec![
                (H_BASIS, vec![c]),
                (Gate::CX, vec![b, c]),
                (TDG, vec![c]),
                (Gate::CX, vec![a, c]),
                (T, vec![c]),
                (Gate::CX, vec![b, c]),
                (TDG, vec![c]),
                (Gate::CX, vec![a, c]),
                (T, vec![b]),
                (T, vec![c]),
                (H_BASIS, vec![c]),
                (Gate::CX, vec![a, b]),
                (T, vec![a]),
                (TDG, vec![b]),
                (Gate::CX, vec![a, b]),
            ]
        }
    }
}

/// Rewrite every gate into U1/U2/U3/CX; measurements and barriers are kept.
/// CCX becomes the six-CNOT network with T/T† phases.
pub fn decompose_to_basis(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.name(), circuit.num_qubits(), circuit.num_clbits());
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate { gate, qubits } => {
                for (g, q) in decompose_gate(gate, qubits) {
                    out.apply(g, &q)?;
                }
            }
            other => {
                out.append(other.clone())?;
            }
        }
    }
    Ok(out)
}

/// ZYZ angles `(θ, φ, λ)` with `u = e^{iα} U3(θ, φ, λ)`.
pub fn u3_angles(u: &UnitaryMatrix) -> (f64, f64, f64) {
    let (a, b, c, d) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    let theta = 2.0 * c.norm().atan2(a.norm());
    const EPS: f64 = 1e-12;
    if c.norm() < EPS {
        // diagonal: only φ + λ is defined
        return (theta, 0.0, (d / a).arg());
    }
    if a.norm() < EPS {
        // anti-diagonal: put the relative phase in φ
        return (theta, (c / -b).arg(), 0.0);
    }
    let phi = (c / a).arg();
    let lambda = (-b / a).arg();
    (theta, phi, lambda)
}

fn fuse_pair(first: &Gate, second: &Gate) -> Gate {
    let m = second.matrix().matmul(&first.matrix()).expect("2x2");
    let (t, p, l) = u3_angles(&m);
    Gate::U3(t, p, l)
}

/// Merge runs of adjacent one-qubit basis gates on the same qubit into a
/// single U3. Optional; routing and fidelity estimates do not apply it.
pub fn fuse_single_qubit_gates(circuit: &Circuit) -> Result<Circuit> {
    let mut pending: Vec<Option<Gate>> = vec![None; circuit.num_qubits()];
    let mut out = Circuit::new(circuit.name(), circuit.num_qubits(), circuit.num_clbits());
    let flush = |out: &mut Circuit, pending: &mut Vec<Option<Gate>>, q: usize| -> Result<()> {
        if let Some(g) = pending[q].take() {
            out.apply(g, &[q])?;
        }
        Ok(())
    };
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate { gate, qubits } if gate.arity() == 1 => {
                let q = qubits[0];
                pending[q] = Some(match pending[q] {
                    Some(prev) => fuse_pair(&prev, gate),
                    None => *gate,
                });
            }
            other => {
                for q in other.qubits() {
                    flush(&mut out, &mut pending, q)?;
                }
                out.append(other.clone())?;
            }
        }
    }
    for q in 0..circuit.num_qubits() {
        flush(&mut out, &mut pending, q)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;
    use crate::state::equal_up_to_global_phase;
    use std::f64::consts::FRAC_PI_2;

    fn single(gate: Gate, n: usize, qubits: &[usize]) -> Circuit {
        let mut c = Circuit::new("g", n, 0);
        c.apply(gate, qubits).unwrap();
        c
    }

    #[test]
    fn hadamard_becomes_u2() {
        let out = decompose_to_basis(&single(Gate::H, 1, &[0])).unwrap();
        assert_eq!(out.instructions(), &[Instruction::gate(Gate::U2(0.0, PI), &[0])]);
    }

    #[test]
    fn ry_becomes_u3() {
        let out = decompose_to_basis(&single(Gate::Ry(0.3), 1, &[0])).unwrap();
        assert_eq!(out.instructions(), &[Instruction::gate(Gate::U3(0.3, 0.0, 0.0), &[0])]);
    }

    #[test]
    fn every_gate_preserved_up_to_phase() {
        let cases = [
            (Gate::H, vec![0]),
            (Gate::X, vec![1]),
            (Gate::Ry(1.1), vec![2]),
            (Gate::CX, vec![2, 0]),
            (Gate::Swap, vec![0, 2]),
            (Gate::CCX, vec![0, 1, 2]),
            (Gate::CCX, vec![2, 0, 1]),
            (Gate::U2(0.2, 0.3), vec![1]),
        ];
        for (g, q) in cases {
            let c = single(g, 3, &q);
            let d = decompose_to_basis(&c).unwrap();
            assert!(d.gates().all(|(g, _)| g.is_basis()));
            let ok =
                equal_up_to_global_phase(&unitary_of(&c).unwrap(), &unitary_of(&d).unwrap(), 1e-9).unwrap();
            assert!(ok, "{g} on {q:?}");
        }
    }

    #[test]
    fn toffoli_uses_six_cnots() {
        let d = decompose_to_basis(&single(Gate::CCX, 3, &[0, 1, 2])).unwrap();
        assert_eq!(d.gate_counts().get("cx"), Some(&6));
    }

    #[test]
    fn u3_angle_extraction() {
        for g in [
            Gate::H,
            Gate::X,
            Gate::Ry(0.7),
            Gate::U1(1.3),
            Gate::U3(0.4, -2.0, 2.9),
            Gate::U3(PI, 0.3, 0.1),
            Gate::U2(FRAC_PI_2, 0.0),
        ] {
            let (t, p, l) = u3_angles(&g.matrix());
            assert!(
                equal_up_to_global_phase(&g.matrix(), &Gate::U3(t, p, l).matrix(), 1e-12).unwrap(),
                "{g}"
            );
        }
    }

    #[test]
    fn fusion_preserves_unitary() {
        let mut c = Circuit::new("f", 2, 0);
        c.h(0).unwrap().ry(0.3, 0).unwrap().x(1).unwrap().cx(0, 1).unwrap().h(1).unwrap().h(1).unwrap();
        let d = decompose_to_basis(&c).unwrap();
        let f = fuse_single_qubit_gates(&d).unwrap();
        assert_eq!(f.instructions().len(), 4);
        assert!(equal_up_to_global_phase(&unitary_of(&c).unwrap(), &unitary_of(&f).unwrap(), 1e-12).unwrap());
    }
}
