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

use std::fmt::Write;

use super::QasmError;
use crate::circuit::{Circuit, Instruction};

/// Render a circuit as canonical OpenQASM 2.0 with one register pair `q`/`c`.
///
/// Angles are printed with 17 significant digits, so `parse(emit(c))`
/// reproduces `c` exactly.
pub fn emit(circuit: &Circuit) -> Result<String, QasmError> {
    let n = circuit.num_qubits();
    let m = circuit.num_clbits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{n}];");
    if m > 0 {
        let _ = writeln!(out, "creg c[{m}];");
    }

    let insts = circuit.instructions();
    let mut i = 0;
    while i < insts.len() {
        if m == n && is_full_measure_run(&insts[i..], n) {
            out.push_str("measure q -> c;\n");
            i += n;
            continue;
        }
        match &insts[i] {
            Instruction::Gate { gate, qubits } => {
                out.push_str(gate.name());
                let params = gate.params();
                if !params.is_empty() {
                    for p in &params {
                        if !p.is_finite() {
                            return Err(QasmError::Emit(format!(
                                "non-finite parameter in `{}`",
                                gate.name()
                            )));
                        }
                    }
                    let rendered: Vec<String> = params.iter().map(|p| format!("{p:.16e}")).collect();
                    let _ = write!(out, "({})", rendered.join(","));
                }
                let operands: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(out, " {};", operands.join(","));
            }
            Instruction::Measure { qubit, clbit } => {
                let _ = writeln!(out, "measure q[{qubit}] -> c[{clbit}];");
            }
            Instruction::Barrier { qubits } => {
                if qubits.len() == n && (0..n).all(|k| qubits[k] == k) {
                    out.push_str("barrier q;\n");
                } else {
                    let operands: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
                    let _ = writeln!(out, "barrier {};", operands.join(","));
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

fn is_full_measure_run(insts: &[Instruction], n: usize) -> bool {
    insts.len() >= n
        && (0..n)
            .all(|k| matches!(insts[k], Instruction::Measure { qubit, clbit } if qubit == k && clbit == k))
}
