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

//! Statevector simulation of interferometer-style quantum experiments
//! with a device noise pipeline: basis transpilation and qubit routing,
//! calibration-driven stochastic noise, readout mitigation and
//! fidelity-product error estimates.
//!
//! ```
//! use qexp_core::{experiments, circuit::simulate_ideal};
//!
//! let c = experiments::build_eraser(true);
//! let p = simulate_ideal(&c).unwrap().probabilities();
//! assert!((p.get("00") - 0.5).abs() < 1e-12);
//! assert!(p.get("01").abs() < 1e-12);
//! ```

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod mitigation;
pub mod noise;
pub mod qasm;
pub mod state;
pub mod transpile;

pub use circuit::{simulate_ideal, unitary_of, Circuit, CountsHistogram, Instruction};
pub use error::{Error, Result};
pub use gates::Gate;
pub use state::{Distribution, StateVector, UnitaryMatrix};
