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

//! Compilation to the device basis, routing and product-of-fidelities
//! error estimates.

mod decompose;
mod route;

pub use decompose::{decompose_gate, decompose_to_basis, fuse_single_qubit_gates, u3_angles};
pub use route::{default_layout, route, CouplingGraph, TranspiledCircuit};

use serde::Serialize;

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::noise::{DeviceModel, NoiseChannel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityEstimate {
    pub fidelity: f64,
    pub error: f64,
}

/// Product of `(1 - rate)` over every gate and every measured qubit's
/// readout. Asymmetric readout errors contribute their mean.
pub fn estimate_fidelity(transpiled: &TranspiledCircuit, device: &DeviceModel) -> Result<FidelityEstimate> {
    estimate_circuit_fidelity(&transpiled.circuit, device)
}

/// Same product model for an arbitrary circuit; CCX and SWAP are charged
/// as their CNOT expansions.
pub fn estimate_circuit_fidelity(circuit: &Circuit, device: &DeviceModel) -> Result<FidelityEstimate> {
    if circuit.num_qubits() > device.num_qubits {
        return Err(Error::CircuitTooWide {
            circuit: circuit.num_qubits(),
            device: device.name.clone(),
            available: device.num_qubits,
        });
    }
    let channel = NoiseChannel::from_device(device);
    let mut fidelity = 1.0;
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate { gate, .. } => fidelity *= 1.0 - channel.gate_error(gate),
            Instruction::Measure { qubit, .. } => fidelity *= 1.0 - channel.readout[*qubit].average(),
            Instruction::Barrier { .. } => {}
        }
    }
    Ok(FidelityEstimate { fidelity, error: 1.0 - fidelity })
}

/// Decompose to the basis and route onto the device's coupling graph.
pub fn transpile(
    circuit: &Circuit,
    device: &DeviceModel,
    initial_layout: Option<&[usize]>,
) -> Result<TranspiledCircuit> {
    let graph = CouplingGraph::from_device(device)?;
    route(&decompose_to_basis(circuit)?, &graph, initial_layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::preset;

    #[test]
    fn empty_circuit_is_perfect() {
        let c = Circuit::new("empty", 2, 0);
        let est = estimate_circuit_fidelity(&c, &preset("vigo-08-20").unwrap()).unwrap();
        assert_eq!(est.fidelity, 1.0);
        assert_eq!(est.error, 0.0);
    }

    #[test]
    fn one_cnot_two_readouts_on_vigo() {
        let mut c = Circuit::new("cx", 2, 2);
        c.cx(0, 1).unwrap().measure_all().unwrap();
        let est = estimate_circuit_fidelity(&c, &preset("vigo-08-20").unwrap()).unwrap();
        let want = 1.0 - 0.9893 * 0.9834 * 0.9834;
        assert!((est.error - want).abs() < 1e-12);
        assert!((est.error - 0.043272).abs() < 1e-6);
    }

    #[test]
    fn reordering_does_not_change_fidelity() {
        let dev = preset("london").unwrap();
        let mut a = Circuit::new("a", 3, 0);
        a.h(0).unwrap().cx(0, 1).unwrap().ry(0.2, 2).unwrap();
        let mut b = Circuit::new("b", 3, 0);
        b.ry(0.2, 2).unwrap().cx(0, 1).unwrap().h(0).unwrap();
        assert_eq!(
            estimate_circuit_fidelity(&a, &dev).unwrap(),
            estimate_circuit_fidelity(&b, &dev).unwrap()
        );
    }

    #[test]
    fn more_gates_lower_fidelity() {
        let dev = preset("essex").unwrap();
        let mut c = Circuit::new("c", 2, 0);
        let mut last = 1.0;
        for _ in 0..5 {
            c.cx(0, 1).unwrap();
            let f = estimate_circuit_fidelity(&c, &dev).unwrap().fidelity;
            assert!(f < last);
            last = f;
            c.h(1).unwrap();
            let f = estimate_circuit_fidelity(&c, &dev).unwrap().fidelity;
            assert!(f < last);
            last = f;
        }
    }
}
