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

//! Greedy shortest-path SWAP insertion.

use std::collections::{BTreeSet, VecDeque};

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::noise::DeviceModel;

/// Undirected qubit connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    /// Build and check for a connected graph with valid indices.
    pub fn new(num_qubits: usize, edges: &[[usize; 2]]) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidGraph("graph has no qubits".into()));
        }
        let mut set = BTreeSet::new();
        for &[a, b] in edges {
            if a >= num_qubits || b >= num_qubits || a == b {
                return Err(Error::InvalidGraph(format!("edge [{a}, {b}] is invalid")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = Self { num_qubits, edges: set, adjacency };
        if graph.distances_from(0).iter().any(Option::is_none) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(graph)
    }

    pub fn from_device(device: &DeviceModel) -> Result<Self> {
        Self::new(device.num_qubits, &device.coupling)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_qubits];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued");
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distances_from(a)[b].expect("connected graph")
    }

    /// BFS shortest path `a -> b`, inclusive; ties go to lower indices.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.num_qubits];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// A routed basis circuit over the physical qubits of a coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TranspiledCircuit {
    pub circuit: Circuit,
    /// Logical qubit -> physical qubit at the start.
    pub layout: Vec<usize>,
    /// Logical qubit -> physical qubit after all inserted SWAPs.
    pub final_layout: Vec<usize>,
    pub swap_count: usize,
}

impl TranspiledCircuit {
    pub fn cnot_count(&self) -> usize {
        self.circuit.gates().filter(|(g, _)| matches!(g, Gate::CX)).count()
    }
}

/// Default layout: identity, except that the logical qubit with the most
/// two-qubit interactions trades places with the best-connected physical
/// qubit (ties broken by lowest index).
pub fn default_layout(circuit: &Circuit, graph: &CouplingGraph) -> Vec<usize> {
    let n = circuit.num_qubits();
    let mut layout: Vec<usize> = (0..n).collect();
    let mut degree = vec![0usize; n];
    for (g, qubits) in circuit.gates() {
        if g.arity() >= 2 {
            for &q in qubits {
                degree[q] += 1;
            }
        }
    }
    let Some(busiest) = (0..n).max_by(|&a, &b| degree[a].cmp(&degree[b]).then(b.cmp(&a))) else {
        return layout;
    };
    if degree[busiest] == 0 {
        return layout;
    }
    let hub = (0..graph.num_qubits())
        .max_by(|&a, &b| graph.degree(a).cmp(&graph.degree(b)).then(b.cmp(&a)))
        .expect("non-empty graph");
    if let Some(owner) = layout.iter().position(|&p| p == hub) {
        layout.swap(owner, busiest);
    } else {
        layout[busiest] = hub;
    }
    layout
}

fn check_layout(layout: &[usize], n: usize, graph: &CouplingGraph) -> Result<()> {
    if layout.len() != n {
        return Err(Error::LayoutConflict(format!("layout maps {} qubits, circuit has {n}", layout.len())));
    }
    for (i, &p) in layout.iter().enumerate() {
        if p >= graph.num_qubits() {
            return Err(Error::LayoutConflict(format!("physical qubit {p} not in graph")));
        }
        if layout[..i].contains(&p) {
            return Err(Error::LayoutConflict(format!("physical qubit {p} assigned twice")));
        }
    }
    Ok(())
}

/// Map a basis-decomposed circuit onto `graph`.
///
/// For every CX whose operands are not adjacent, the control is walked
/// along a BFS shortest path towards the target with SWAPs (each emitted as
/// three CX on the edge) until the pair is adjacent. The output acts on
/// all physical qubits of the graph; measurements are emitted last, on the
/// final physical position of their qubit.
pub fn route(
    circuit: &Circuit,
    graph: &CouplingGraph,
    initial_layout: Option<&[usize]>,
) -> Result<TranspiledCircuit> {
    let n = circuit.num_qubits();
    if n > graph.num_qubits() {
        return Err(Error::LayoutConflict(format!(
            "circuit has {n} qubits, graph only {}",
            graph.num_qubits()
        )));
    }
    let layout = match initial_layout {
        Some(l) => l.to_vec(),
        None => default_layout(circuit, graph),
    };
    check_layout(&layout, n, graph)?;

    let mut current = layout.clone();
    // physical -> logical occupant
    let mut occupant: Vec<Option<usize>> = vec![None; graph.num_qubits()];
    for (l, &p) in layout.iter().enumerate() {
        occupant[p] = Some(l);
    }

    let mut out = Circuit::new(circuit.name(), graph.num_qubits(), circuit.num_clbits());
    let mut swap_count = 0;
    // measurement is terminal, so every measure can move to the end
    let mut deferred = Vec::new();
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate { gate, qubits } => {
                if !gate.is_basis() {
                    return Err(Error::NotBasis(gate.name().into()));
                }
                if qubits.len() == 2 {
                    let (pa, pb) = (current[qubits[0]], current[qubits[1]]);
                    if !graph.is_edge(pa, pb) {
                        let path = graph.shortest_path(pa, pb);
                        for w in path[..path.len() - 1].windows(2) {
                            let (x, y) = (w[0], w[1]);
                            for (c, t) in [(x, y), (y, x), (x, y)] {
                                out.push_unchecked(Instruction::gate(Gate::CX, &[c, t]));
                            }
                            occupant.swap(x, y);
                            for p in [x, y] {
                                if let Some(l) = occupant[p] {
                                    current[l] = p;
                                }
                            }
                            swap_count += 1;
                        }
                    }
                }
                let mapped: Vec<usize> = qubits.iter().map(|&q| current[q]).collect();
                out.apply(*gate, &mapped)?;
            }
            Instruction::Measure { qubit, clbit } => deferred.push((*qubit, *clbit)),
            Instruction::Barrier { qubits } => {
                let mapped: Vec<usize> = qubits.iter().map(|&q| current[q]).collect();
                out.barrier(&mapped)?;
            }
        }
    }
    for (qubit, clbit) in deferred {
        out.measure(current[qubit], clbit)?;
    }
    Ok(TranspiledCircuit { circuit: out, layout, final_layout: current, swap_count })
}
