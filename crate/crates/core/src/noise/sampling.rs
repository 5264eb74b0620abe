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

//! Shot sampling and stochastic-Pauli trajectory simulation.
//!
//! Every shot `i` draws from its own generator: ChaCha8 seeded with
//! `seed_from_u64(seed)` and switched to stream `i`. Within a shot the draws
//! are, in order: one uniform for the measurement outcome, then for each gate
//! with a nonzero error rate one uniform for the error event (plus one
//! Pauli choice per touched qubit when it fires), then one uniform per
//! measured bit with a nonzero readout rate. Shots are therefore
//! independent of each other and of execution order, and a noiseless run
//! consumes the same measurement draw as [`sample_counts`].

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CountsHistogram};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::noise::device::{DeviceModel, ReadoutError};
use crate::state::{Distribution, StateVector, UnitaryMatrix};

/// 64-bit seed for all sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RandomSeed(pub u64);

impl From<u64> for RandomSeed {
    fn from(v: u64) -> Self {
        RandomSeed(v)
    }
}

impl RandomSeed {
    /// Derive an independent seed for sub-task `index` (SplitMix64 finalizer).
    pub fn derive(self, index: u64) -> RandomSeed {
        let mut z = self.0 ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RandomSeed(z ^ (z >> 31))
    }
}

/// Generator for one shot.
pub fn shot_rng(seed: RandomSeed, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(shot);
    rng
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn draw_index(cum: &[f64], probs: &[f64], u: f64) -> usize {
    let total = *cum.last().expect("non-empty");
    let i = cum.partition_point(|&c| c <= u * total);
    if i < cum.len() {
        return i;
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(cum.len() - 1)
}

/// Draw `shots` outcomes over all qubits of `state`.
pub fn sample_counts(state: &StateVector, shots: u64, seed: RandomSeed) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = state.probabilities();
    let cum = cumulative(probs.as_slice());
    let mut hist = CountsHistogram::new(state.num_qubits());
    for shot in 0..shots {
        let u: f64 = shot_rng(seed, shot).gen();
        hist.record_index(draw_index(&cum, probs.as_slice(), u));
    }
    Ok(hist)
}

/// Draw `shots` outcomes from an explicit distribution, same stream rule.
pub fn sample_distribution(dist: &Distribution, shots: u64, seed: RandomSeed) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let cum = cumulative(dist.as_slice());
    let mut hist = CountsHistogram::new(dist.num_bits());
    for shot in 0..shots {
        let u: f64 = shot_rng(seed, shot).gen();
        hist.record_index(draw_index(&cum, dist.as_slice(), u));
    }
    Ok(hist)
}

/// Per-gate depolarizing probabilities and per-qubit readout confusion.
///
/// CCX and SWAP are charged the error of their CNOT expansions
/// (6 CX + 9 one-qubit gates, and 3 CX).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseChannel {
    pub one_qubit: f64,
    pub two_qubit: f64,
    pub readout: Vec<ReadoutError>,
}

impl NoiseChannel {
    pub fn from_device(device: &DeviceModel) -> Self {
        Self {
            one_qubit: device.single_qubit_error,
            two_qubit: device.cnot_error,
            readout: device.readout_error.clone(),
        }
    }

    pub fn gate_error(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::CX => self.two_qubit,
            Gate::Swap => 1.0 - (1.0 - self.two_qubit).powi(3),
            Gate::CCX => 1.0 - (1.0 - self.two_qubit).powi(6) * (1.0 - self.one_qubit).powi(9),
            _ => self.one_qubit,
        }
    }
}

fn pauli(code: u8) -> UnitaryMatrix {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let rows = match code {
        1 => vec![vec![z, o], vec![o, z]],
        2 => vec![vec![z, -i], vec![i, z]],
        _ => vec![vec![o, z], vec![z, -o]],
    };
    UnitaryMatrix::from_rows(rows).expect("2x2")
}

/// Error insertion: (gate ordinal, Pauli code 1..=3 per touched qubit).
type Trajectory = Vec<(usize, Vec<u8>)>;

struct Program<'a> {
    num_qubits: usize,
    gates: Vec<(&'a Gate, &'a [usize], UnitaryMatrix, f64)>,
    paulis: [UnitaryMatrix; 3],
}

impl<'a> Program<'a> {
    fn new(circuit: &'a Circuit, channel: &NoiseChannel) -> Self {
        Self {
            num_qubits: circuit.num_qubits(),
            gates: circuit.gates().map(|(g, q)| (g, q, g.matrix(), channel.gate_error(g))).collect(),
            paulis: [pauli(1), pauli(2), pauli(3)],
        }
    }

    fn run(&self, trajectory: &Trajectory) -> Result<StateVector> {
        let mut state = StateVector::new(self.num_qubits)?;
        let mut events = trajectory.iter().peekable();
        for (k, (_, qubits, m, _)) in self.gates.iter().enumerate() {
            state.apply_gate_mut(m, qubits)?;
            if let Some((_, codes)) = events.next_if(|(idx, _)| *idx == k) {
                for (&q, &code) in qubits.iter().zip(codes) {
                    state.apply_gate_mut(&self.paulis[code as usize - 1], &[q])?;
                }
            }
        }
        Ok(state)
    }
}

fn check_width(circuit: &Circuit, device: &DeviceModel) -> Result<()> {
    if circuit.num_qubits() > device.num_qubits {
        return Err(Error::CircuitTooWide {
            circuit: circuit.num_qubits(),
            device: device.name.clone(),
            available: device.num_qubits,
        });
    }
    Ok(())
}

fn extract_bits(index: usize, n: usize, qubits: &[usize]) -> usize {
    let m = qubits.len();
    qubits.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((index >> (n - 1 - q)) & 1) << (m - 1 - k)))
}

/// Monte-Carlo trajectory sampling of `circuit` on a noisy `device`.
///
/// After each gate, with probability equal to its error rate, an
/// independent uniformly random non-identity Pauli is applied to every
/// qubit the gate touched. Each measured bit is then flipped with its
/// `p01`/`p10` readout probability. Bitstrings cover the measured qubits
/// in ascending order (all qubits when the circuit has no measurements).
pub fn simulate_noisy(
    circuit: &Circuit,
    device: &DeviceModel,
    shots: u64,
    seed: RandomSeed,
) -> Result<CountsHistogram> {
    check_width(circuit, device)?;
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let channel = NoiseChannel::from_device(device);
    let program = Program::new(circuit, &channel);
    let measured = circuit.measured_qubits();
    let n = circuit.num_qubits();
    let m = measured.len();

    let mut cache: HashMap<Trajectory, (Vec<f64>, Vec<f64>)> = HashMap::new();
    let mut hist = CountsHistogram::new(m);
    for shot in 0..shots {
        let mut rng = shot_rng(seed, shot);
        let u: f64 = rng.gen();
        let mut trajectory = Trajectory::new();
        for (k, (_, qubits, _, rate)) in program.gates.iter().enumerate() {
            if *rate > 0.0 && rng.gen::<f64>() < *rate {
                let codes = qubits.iter().map(|_| rng.gen_range(1..=3u8)).collect();
                trajectory.push((k, codes));
            }
        }
        if !cache.contains_key(&trajectory) {
            let probs = program.run(&trajectory)?.probabilities().as_slice().to_vec();
            let cum = cumulative(&probs);
            cache.insert(trajectory.clone(), (probs, cum));
        }
        let (probs, cum) = &cache[&trajectory];
        let mut outcome = extract_bits(draw_index(cum, probs, u), n, &measured);
        for (k, &q) in measured.iter().enumerate() {
            let bit = m - 1 - k;
            let r = channel.readout[q];
            let flip = if (outcome >> bit) & 1 == 0 { r.p01 } else { r.p10 };
            if flip > 0.0 && rng.gen::<f64>() < flip {
                outcome ^= 1 << bit;
            }
        }
        hist.record_index(outcome);
    }
    Ok(hist)
}

/// Independent asymmetric bit flips applied to an exact distribution;
/// `readout[k]` acts on bit k (q0-leftmost).
pub fn apply_readout_noise(dist: &Distribution, readout: &[ReadoutError]) -> Result<Distribution> {
    let n = dist.num_bits();
    if readout.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: readout.len() });
    }
    let mut probs = dist.as_slice().to_vec();
    for (k, r) in readout.iter().enumerate() {
        let mask = 1usize << (n - 1 - k);
        for i in 0..probs.len() {
            if i & mask != 0 {
                continue;
            }
            let (p0, p1) = (probs[i], probs[i | mask]);
            probs[i] = p0 * (1.0 - r.p01) + p1 * r.p10;
            probs[i | mask] = p0 * r.p01 + p1 * (1.0 - r.p10);
        }
    }
    Distribution::new(n, probs)
}

/// Default cap on trajectories enumerated by [`noisy_distribution_exact`].
pub const MAX_EXACT_TRAJECTORIES: u128 = 1 << 20;

/// Exact outcome distribution of the same noise model as [`simulate_noisy`],
/// by enumerating every Pauli trajectory with its weight.
pub fn noisy_distribution_exact(circuit: &Circuit, device: &DeviceModel) -> Result<Distribution> {
    check_width(circuit, device)?;
    let channel = NoiseChannel::from_device(device);
    let program = Program::new(circuit, &channel);
    let branches: u128 = program
        .gates
        .iter()
        .map(|(_, q, _, rate)| if *rate > 0.0 { 1 + 3u128.pow(q.len() as u32) } else { 1 })
        .try_fold(1u128, |acc, b| acc.checked_mul(b))
        .unwrap_or(u128::MAX);
    if branches > MAX_EXACT_TRAJECTORIES {
        return Err(Error::TooManyTrajectories(branches));
    }
    let measured = circuit.measured_qubits();
    let mut acc = vec![0.0; 1usize << measured.len()];
    let start = StateVector::new(program.num_qubits)?;
    enumerate(&program, 0, start, 1.0, &measured, &mut acc)?;
    let ideal = Distribution::new(measured.len(), acc)?;
    let readout: Vec<ReadoutError> = measured.iter().map(|&q| channel.readout[q]).collect();
    apply_readout_noise(&ideal, &readout)
}

fn enumerate(
    program: &Program<'_>,
    k: usize,
    mut state: StateVector,
    weight: f64,
    measured: &[usize],
    acc: &mut [f64],
) -> Result<()> {
    if k == program.gates.len() {
        let marginal = state.marginal_probabilities(measured)?;
        for (a, p) in acc.iter_mut().zip(marginal.as_slice()) {
            *a += weight * p;
        }
        return Ok(());
    }
    let (_, qubits, m, rate) = &program.gates[k];
    state.apply_gate_mut(m, qubits)?;
    if *rate > 0.0 {
        let combos = 3usize.pow(qubits.len() as u32);
        let each = rate / combos as f64;
        for c in 0..combos {
            let mut branch = state.clone();
            let mut code = c;
            for &q in qubits.iter() {
                branch.apply_gate_mut(&program.paulis[code % 3], &[q])?;
                code /= 3;
            }
            enumerate(program, k + 1, branch, weight * each, measured, acc)?;
        }
    }
    enumerate(program, k + 1, state, weight * (1.0 - rate), measured, acc)
}
