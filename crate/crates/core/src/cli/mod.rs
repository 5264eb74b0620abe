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

//! `qexp` command-line interface.
//!
//! Exit status is 0 on success, 2 for usage, config or parse errors and 3
//! for failures during simulation or output.

mod config;
mod exec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{ExperimentKind, Format, Range};
pub use exec::{execute, observable_value, Backend, Execution, Row};

use crate::error::Error;
use crate::noise::{preset, preset_names};
use crate::qasm;
use crate::transpile::{estimate_fidelity, transpile};
use config::{ConfigFile, ExperimentParams, SweepParams, SweepSettings};

/// Command failure with its exit status class.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }

    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Qasm(_)
            | Error::InvalidArgument(_)
            | Error::AngleSum(_)
            | Error::AngleOutOfRange(_)
            | Error::UnknownPreset(_)
            | Error::InvalidDevice(_)
            | Error::Serde(_)
            | Error::ZeroShots
            | Error::LayoutConflict(_)
            | Error::CircuitTooWide { .. }
            | Error::InvalidGraph(_)
            | Error::DisconnectedGraph
            | Error::MitigationTooLarge(_)
            | Error::QubitCount(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qexp", version, about = "Simulate interferometer experiments on ideal and noisy qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and report its distribution and observable.
    Run {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate an experiment over a parameter grid.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Decompose and route an OpenQASM file for a device.
    Transpile {
        input: PathBuf,
        /// Preset name or calibration document path.
        #[arg(long)]
        device: String,
        /// Initial layout as physical qubits, e.g. `1,0,2`.
        #[arg(long, value_delimiter = ',')]
        layout: Option<Vec<usize>>,
        /// Write the routed program here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the JSON report here instead of stderr.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parse an OpenQASM file and print it in canonical form.
    Qasm {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the OpenQASM program of an experiment.
    Circuit {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List device presets, or print one calibration document.
    Devices {
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Debug, Args, Default)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    experiment: Option<ExperimentKind>,
    /// Eraser: add the erasing Hadamard.
    #[arg(long)]
    erase: bool,
    /// Bomb: leave the bomb out of the interferometer.
    #[arg(long)]
    no_bomb: bool,
    /// General bomb: number of beamsplitters.
    #[arg(long)]
    n: Option<usize>,
    /// General bomb: last beamsplitter angle (units of π); others share the rest.
    /// Hardy: both angles.
    #[arg(long)]
    theta: Option<f64>,
    /// General bomb: explicit angle list (units of π), must sum to 1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    thetas: Option<Vec<f64>>,
    /// Hardy: first interferometer angle (units of π).
    #[arg(long)]
    theta0: Option<f64>,
    /// Hardy: second interferometer angle (units of π).
    #[arg(long)]
    theta1: Option<f64>,
}

impl ExperimentArgs {
    fn params(&self) -> ExperimentParams {
        ExperimentParams {
            kind: self.experiment,
            erase: self.erase.then_some(true),
            present: self.no_bomb.then_some(false),
            n: self.n,
            theta_over_pi: self.theta,
            thetas_over_pi: self.thetas.clone(),
            theta0_over_pi: self.theta0,
            theta1_over_pi: self.theta1,
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config document; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `ideal`, a preset name or a calibration document path.
    #[arg(long)]
    device: Option<String>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Apply readout-error mitigation.
    #[arg(long)]
    mitigate: bool,
    /// Use exact probabilities instead of sampled shots.
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
struct GridArgs {
    /// Beamsplitter counts, e.g. `2,3,4,5`.
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    /// `start:stop:step` in units of π.
    #[arg(long, value_parser = Range::parse)]
    theta_range: Option<Range>,
    #[arg(long, value_parser = Range::parse)]
    theta0_range: Option<Range>,
    #[arg(long, value_parser = Range::parse)]
    theta1_range: Option<Range>,
    /// Hardy: sweep θ₀ = θ₁ along `--theta-range`.
    #[arg(long)]
    diagonal: bool,
    /// Sampled runs per grid point.
    #[arg(long)]
    repeats: Option<usize>,
}

/// Entry point used by the `qexp` binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("qexp: {}", f.message());
            f.code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::runtime(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::runtime(e.to_string()))
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_qasm_file(path: &Path) -> Result<crate::circuit::Circuit, Failure> {
    let text = read_input(path)?;
    qasm::parse(&text).map_err(|e| match e.position() {
        Some((line, column)) => Failure::usage(format!("{}:{line}:{column}: {}", path.display(), e.detail())),
        None => Failure::usage(format!("{}: {}", path.display(), e.detail())),
    })
}

#[derive(Serialize)]
struct TranspileReport {
    device: String,
    logical_qubits: usize,
    physical_qubits: usize,
    gate_counts: std::collections::BTreeMap<String, usize>,
    cnot_count: usize,
    swap_count: usize,
    layout: Vec<usize>,
    final_layout: Vec<usize>,
    fidelity: f64,
    error: f64,
}

#[derive(Serialize)]
struct PresetSummary {
    key: &'static str,
    name: String,
    calibration_date: String,
    num_qubits: usize,
    cnot_error: f64,
    mean_readout_error: f64,
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { experiment, common } => {
            let file = load_config(common.config.as_deref())?;
            let (params, mut settings, _) =
                config::settings(file, experiment.params(), &common, Format::Json, None)?;
            settings.spec = params.resolve()?;
            let result = exec::run_once(&settings)?;
            let text = match settings.format {
                Format::Json => {
                    let mut t = serde_json::to_string_pretty(&result.document)
                        .map_err(|e| Failure::runtime(e.to_string()))?;
                    t.push('\n');
                    t
                }
                Format::Csv => exec::rows_to_csv(&result.rows)?,
            };
            write_output(settings.output.as_deref(), &text)
        }
        Command::Sweep { experiment, common, grid } => {
            let file = load_config(common.config.as_deref())?;
            let flags = SweepParams {
                n_values: grid.n_values,
                theta: grid.theta_range,
                theta0: grid.theta0_range,
                theta1: grid.theta1_range,
                diagonal: grid.diagonal.then_some(true),
                repeats: grid.repeats,
            };
            let (params, run, sweep) =
                config::settings(file, experiment.params(), &common, Format::Csv, Some(flags))?;
            let grid = config::sweep_grid(&params, &sweep)?;
            let repeats = sweep.repeats.unwrap_or(1);
            if repeats == 0 {
                return Err(Failure::usage("repeats must be at least 1"));
            }
            let settings = SweepSettings { run, grid, repeats };
            let rows = exec::sweep(&settings)?;
            write_output(settings.run.output.as_deref(), &exec::render_rows(&rows, settings.run.format)?)
        }
        Command::Transpile { input, device, layout, output, report } => {
            let circuit = parse_qasm_file(&input)?;
            let model = crate::noise::load_device(&device, circuit.num_qubits())?;
            let routed = transpile(&circuit, &model, layout.as_deref())?;
            let fid = estimate_fidelity(&routed, &model)?;
            let doc = TranspileReport {
                device,
                logical_qubits: circuit.num_qubits(),
                physical_qubits: routed.circuit.num_qubits(),
                gate_counts: routed.circuit.gate_counts(),
                cnot_count: routed.cnot_count(),
                swap_count: routed.swap_count,
                layout: routed.layout.clone(),
                final_layout: routed.final_layout.clone(),
                fidelity: fid.fidelity,
                error: fid.error,
            };
            let program = qasm::emit(&routed.circuit).map_err(|e| Failure::runtime(e.to_string()))?;
            write_output(output.as_deref(), &program)?;
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::runtime(e.to_string()))?;
            text.push('\n');
            match report {
                Some(p) => write_output(Some(&p), &text),
                None => {
                    eprint!("{text}");
                    Ok(())
                }
            }
        }
        Command::Qasm { input, output } => {
            let circuit = parse_qasm_file(&input)?;
            let text = qasm::emit(&circuit).map_err(|e| Failure::runtime(e.to_string()))?;
            write_output(output.as_deref(), &text)
        }
        Command::Circuit { experiment, config, output } => {
            let file = load_config(config.as_deref())?;
            let spec = experiment.params().over(file.experiment).resolve()?;
            let text = qasm::emit(&spec.build()?).map_err(|e| Failure::runtime(e.to_string()))?;
            write_output(output.or(file.output).as_deref(), &text)
        }
        Command::Devices { show } => {
            let text = match show {
                Some(key) => preset(&key)?.to_json(),
                None => {
                    let mut list = Vec::new();
                    for key in preset_names() {
                        let d = preset(key)?;
                        let mean = d.readout_error.iter().map(|r| r.average()).sum::<f64>()
                            / d.readout_error.len() as f64;
                        list.push(PresetSummary {
                            key,
                            name: d.name.clone(),
                            calibration_date: d.calibration_date.clone(),
                            num_qubits: d.num_qubits,
                            cnot_error: d.cnot_error,
                            mean_readout_error: mean,
                        });
                    }
                    serde_json::to_string_pretty(&list).map_err(|e| Failure::runtime(e.to_string()))?
                }
            };
            write_output(None, &format!("{}\n", text.trim_end()))
        }
    }
}
