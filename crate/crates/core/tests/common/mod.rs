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

//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qexp_core::circuit::{unitary_of, Circuit, Instruction};
use qexp_core::gates::Gate;
use qexp_core::transpile::TranspiledCircuit;
use rand::Rng;

const ANGLE: std::ops::Range<f64> = -7.0..7.0;

/// Any supported gate.
pub fn gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        Just(Gate::H),
        Just(Gate::X),
        ANGLE.prop_map(Gate::Ry),
        Just(Gate::CX),
        Just(Gate::CCX),
        Just(Gate::Swap),
        ANGLE.prop_map(Gate::U1),
        (ANGLE, ANGLE).prop_map(|(a, b)| Gate::U2(a, b)),
        (ANGLE, ANGLE, ANGLE).prop_map(|(a, b, c)| Gate::U3(a, b, c)),
    ]
}

/// Gate-only circuit on `min_q..=max_q` qubits; gates too wide for the
/// register are skipped.
pub fn gate_circuit(min_q: usize, max_q: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (min_q..=max_q).prop_flat_map(move |n| {
        let op = (gate(), Just((0..n).collect::<Vec<usize>>()).prop_shuffle());
        prop::collection::vec(op, 0..=max_gates).prop_map(move |ops| {
            let mut c = Circuit::new("random", n, n);
            for (g, qs) in ops {
                if g.arity() <= n {
                    c.apply(g, &qs[..g.arity()]).unwrap();
                }
            }
            c
        })
    })
}

/// Gate circuit followed by measurements of a random subset of qubits into
/// distinct clbits, plus optional barriers.
pub fn full_circuit(max_q: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (gate_circuit(1, max_q, max_gates), any::<u64>()).prop_map(|(base, bits)| {
        let n = base.num_qubits();
        let mut c = Circuit::new("random", n, n);
        for (k, inst) in base.instructions().iter().enumerate() {
            c.append(inst.clone()).unwrap();
            if (bits >> (k % 64)) & 1 == 1 && k % 5 == 0 {
                c.barrier(&[k % n]).unwrap();
            }
        }
        if bits & 1 == 1 {
            c.barrier(&(0..n).collect::<Vec<_>>()).unwrap();
        }
        for q in 0..n {
            if (bits >> (q + 8)) & 1 == 1 {
                c.measure(q, (q + (bits as usize >> 40)) % n).unwrap();
            }
        }
        c
    })
}

/// Physical basis index of logical basis state `x` placed by `layout`.
pub fn embed(x: usize, n: usize, layout: &[usize], big: usize) -> usize {
    let mut out = 0;
    for (q, &p) in layout.iter().enumerate().take(n) {
        if (x >> (n - 1 - q)) & 1 == 1 {
            out |= 1 << (big - 1 - p);
        }
    }
    out
}

/// Maximum deviation between the routed circuit and the logical circuit
/// once the initial and final layouts are accounted for and a single
/// global phase is removed. Measurements are ignored.
pub fn routed_deviation(logical: &Circuit, routed: &TranspiledCircuit) -> f64 {
    let strip = |c: &Circuit| {
        let mut out = Circuit::new("gates", c.num_qubits(), 0);
        for inst in c.instructions() {
            if let Instruction::Gate { .. } = inst {
                out.append(inst.clone()).unwrap();
            }
        }
        out
    };
    let u = unitary_of(&strip(logical)).unwrap();
    let v = unitary_of(&strip(&routed.circuit)).unwrap();
    let n = logical.num_qubits();
    let big = routed.circuit.num_qubits();

    // Pair every expected amplitude with the actual one.
    let mut pairs: Vec<(Complex64, Complex64)> = Vec::new();
    for x in 0..(1usize << n) {
        let col = embed(x, n, &routed.layout, big);
        let mut expected = vec![Complex64::new(0.0, 0.0); 1 << big];
        for y in 0..(1usize << n) {
            expected[embed(y, n, &routed.final_layout, big)] = u.get(y, x);
        }
        for (row, e) in expected.into_iter().enumerate() {
            pairs.push((e, v.get(row, col)));
        }
    }
    let overlap: Complex64 = pairs.iter().map(|(e, a)| e.conj() * a).sum();
    if overlap.norm() < 1e-12 {
        return f64::INFINITY;
    }
    let phase = overlap / overlap.norm();
    pairs.iter().map(|(e, a)| (e * phase - a).norm()).fold(0.0, f64::max)
}

/// Random circuit from a plain RNG, for non-proptest harnesses.
pub fn random_circuit<R: Rng>(rng: &mut R, max_q: usize, max_gates: usize, measure: bool) -> Circuit {
    let n = rng.gen_range(1..=max_q);
    let mut c = Circuit::new("random", n, n);
    for _ in 0..rng.gen_range(0..=max_gates) {
        let kind = rng.gen_range(0..9);
        let mut a = || rng.gen_range(-7.0..7.0);
        let g = match kind {
            0 => Gate::H,
            1 => Gate::X,
            2 => Gate::Ry(a()),
            3 => Gate::CX,
            4 => Gate::CCX,
            5 => Gate::Swap,
            6 => Gate::U1(a()),
            7 => Gate::U2(a(), a()),
            _ => Gate::U3(a(), a(), a()),
        };
        if g.arity() > n {
            continue;
        }
        let mut qs: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qs.swap(i, rng.gen_range(0..=i));
        }
        c.apply(g, &qs[..g.arity()]).unwrap();
    }
    if measure {
        let offset = rng.gen_range(0..n);
        for q in 0..n {
            if rng.gen_bool(0.6) {
                c.measure(q, (q + offset) % n).unwrap();
            }
        }
    }
    c
}
