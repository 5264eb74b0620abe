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

//! Experiment execution and result tables.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Format, Grid, RunSettings, SweepSettings};
use super::Failure;
use crate::analysis::{
    binomial_standard_error, eta_from_distribution, gamma_from_distribution, run_statistics,
};
use crate::circuit::{simulate_ideal, Circuit, CountsHistogram};
use crate::error::{Error, Result};
use crate::experiments::{AngleVector, ExperimentSpec, Observable};
use crate::mitigation::{build_confusion_matrix, mitigate_distribution, ConfusionMatrix};
use crate::noise::{load_device, noisy_distribution_exact, simulate_noisy, DeviceModel, RandomSeed};
use crate::state::Distribution;
use crate::transpile::{estimate_fidelity, transpile, FidelityEstimate};

/// Seed offset for the calibration runs behind sampled mitigation.
const CALIBRATION_STREAM: u64 = u64::MAX;

/// Where a circuit runs.
#[derive(Debug, Clone)]
pub enum Backend {
    Ideal,
    Noisy { label: String, model: DeviceModel },
}

impl Backend {
    pub fn resolve(spec: &str) -> Result<Backend> {
        if spec.eq_ignore_ascii_case("ideal") {
            return Ok(Backend::Ideal);
        }
        let model = load_device(spec, 1)?;
        Ok(Backend::Noisy { label: spec.to_string(), model })
    }

    pub fn label(&self) -> &str {
        match self {
            Backend::Ideal => "ideal",
            Backend::Noisy { label, .. } => label,
        }
    }
}

/// Raw and (optionally) mitigated outcome distributions for one execution.
#[derive(Debug, Clone)]
pub struct Execution {
    pub counts: Option<CountsHistogram>,
    pub distribution: Distribution,
    pub mitigated: Option<Distribution>,
}

pub fn ideal_distribution(circuit: &Circuit) -> Result<Distribution> {
    simulate_ideal(circuit)?.marginal_probabilities(&circuit.measured_qubits())
}

/// Run `circuit` once. `shots = None` selects exact probabilities.
pub fn execute(
    circuit: &Circuit,
    backend: &Backend,
    shots: Option<u64>,
    seed: RandomSeed,
    mitigate: bool,
) -> Result<Execution> {
    let measured = circuit.measured_qubits();
    match backend {
        Backend::Ideal => {
            let (counts, distribution) = match shots {
                None => (None, ideal_distribution(circuit)?),
                Some(s) => {
                    let device = DeviceModel::noiseless(circuit.num_qubits());
                    let counts = simulate_noisy(circuit, &device, s, seed)?;
                    let dist = counts.to_distribution();
                    (Some(counts), dist)
                }
            };
            Ok(Execution { counts, distribution, mitigated: None })
        }
        Backend::Noisy { model, .. } => {
            let (counts, distribution) = match shots {
                None => (None, noisy_distribution_exact(circuit, model)?),
                Some(s) => {
                    let counts = simulate_noisy(circuit, model, s, seed)?;
                    let dist = counts.to_distribution();
                    (Some(counts), dist)
                }
            };
            let mitigated = if mitigate {
                let matrix = match shots {
                    None => {
                        let readout: Vec<_> = measured.iter().map(|&q| model.readout_error[q]).collect();
                        ConfusionMatrix::from_readout(&readout)?
                    }
                    Some(s) => {
                        if measured.iter().enumerate().any(|(k, &q)| k != q) {
                            return Err(Error::InvalidArgument(
                                "sampled mitigation needs the measured qubits to be 0..m".into(),
                            ));
                        }
                        build_confusion_matrix(model, measured.len(), s, seed.derive(CALIBRATION_STREAM))?
                    }
                };
                Some(mitigate_distribution(&distribution, &matrix)?)
            } else {
                None
            };
            Ok(Execution { counts, distribution, mitigated })
        }
    }
}

/// Observable value; `None` when its denominator vanishes.
pub fn observable_value(obs: Observable, dist: &Distribution) -> Result<Option<f64>> {
    let value = match obs {
        Observable::None => return Ok(None),
        Observable::Eta(labeling) => eta_from_distribution(dist, labeling),
        Observable::Gamma => gamma_from_distribution(dist),
    };
    match value {
        Ok(v) => Ok(Some(v)),
        Err(Error::Degenerate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// One line of the result table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub theta_over_pi: Option<f64>,
    pub theta0_over_pi: Option<f64>,
    pub theta1_over_pi: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub observable: String,
    pub value: Option<f64>,
    pub theory: Option<f64>,
    pub std_dev: Option<f64>,
    pub device: String,
    pub mitigated: bool,
}

impl Row {
    fn template(spec: &ExperimentSpec) -> Row {
        let mut row = Row {
            experiment: spec.kind().to_string(),
            n: None,
            theta_over_pi: None,
            theta0_over_pi: None,
            theta1_over_pi: None,
            shots: None,
            seed: None,
            observable: String::new(),
            value: None,
            theory: None,
            std_dev: None,
            device: "ideal".into(),
            mitigated: false,
        };
        match spec {
            ExperimentSpec::GeneralBomb { thetas } => {
                row.n = Some(thetas.len());
                row.theta_over_pi = thetas.as_slice().last().map(|t| t / PI);
            }
            ExperimentSpec::Hardy { theta0, theta1 } => {
                row.theta0_over_pi = Some(theta0 / PI);
                row.theta1_over_pi = Some(theta1 / PI);
            }
            _ => {}
        }
        row
    }
}

/// Serialized parameters, in units of π.
#[derive(Debug, Clone, Serialize)]
pub struct SpecDocument {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erase: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub present: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thetas_over_pi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0_over_pi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta1_over_pi: Option<f64>,
}

impl From<&ExperimentSpec> for SpecDocument {
    fn from(spec: &ExperimentSpec) -> Self {
        let mut doc = SpecDocument {
            kind: spec.kind(),
            erase: None,
            present: None,
            thetas_over_pi: None,
            theta0_over_pi: None,
            theta1_over_pi: None,
        };
        match spec {
            ExperimentSpec::Eraser { erase } => doc.erase = Some(*erase),
            ExperimentSpec::Bomb { present } => doc.present = Some(*present),
            ExperimentSpec::GeneralBomb { thetas } => {
                doc.thetas_over_pi = Some(thetas.as_slice().iter().map(|t| t / PI).collect())
            }
            ExperimentSpec::Hardy { theta0, theta1 } => {
                doc.theta0_over_pi = Some(theta0 / PI);
                doc.theta1_over_pi = Some(theta1 / PI);
            }
        }
        doc
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservableDocument {
    pub name: &'static str,
    pub value: Option<f64>,
    pub mitigated_value: Option<f64>,
    pub theory: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunDocument {
    pub experiment: SpecDocument,
    pub circuit: String,
    pub device: String,
    pub mode: &'static str,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub counts: Option<BTreeMap<String, u64>>,
    pub distribution: BTreeMap<String, f64>,
    /// Per-outcome binomial standard error `√(p(1−p)/shots)`.
    pub binomial_standard_error: Option<BTreeMap<String, f64>>,
    pub mitigated_distribution: Option<BTreeMap<String, f64>>,
    pub theory_distribution: Option<BTreeMap<String, f64>>,
    pub observable: ObservableDocument,
    pub fidelity: Option<FidelityEstimate>,
}

fn to_map(dist: &Distribution) -> BTreeMap<String, f64> {
    dist.iter().collect()
}

pub struct RunResult {
    pub document: RunDocument,
    pub rows: Vec<Row>,
}

pub fn run_once(settings: &RunSettings) -> std::result::Result<RunResult, Failure> {
    let backend = Backend::resolve(&settings.device)?;
    let spec = &settings.spec;
    let circuit = spec.build()?;
    let shots = if settings.exact { None } else { Some(settings.shots) };
    let seed = RandomSeed(settings.seed);
    let exec = execute(&circuit, &backend, shots, seed, settings.mitigate).map_err(Failure::from)?;
    let obs = spec.observable();
    let theory = spec.theory_value()?;
    let theory_dist = spec.theory_distribution()?;
    let value = observable_value(obs, &exec.distribution)?;
    let mitigated_value = match &exec.mitigated {
        Some(d) => observable_value(obs, d)?,
        None => None,
    };
    let fidelity = match &backend {
        Backend::Ideal => None,
        Backend::Noisy { model, .. } => Some(estimate_fidelity(&transpile(&circuit, model, None)?, model)?),
    };
    let stderr_map =
        shots.map(|s| exec.distribution.iter().map(|(k, p)| (k, binomial_standard_error(p, s))).collect());

    let mut rows = Vec::new();
    let base = Row {
        shots,
        seed: shots.map(|_| settings.seed),
        device: backend.label().to_string(),
        ..Row::template(spec)
    };
    let variants = std::iter::once((&exec.distribution, false, value))
        .chain(exec.mitigated.as_ref().map(|d| (d, true, mitigated_value)));
    for (dist, mitigated, v) in variants {
        if obs != Observable::None {
            rows.push(Row { observable: obs.name().into(), value: v, theory, mitigated, ..base.clone() });
        }
        for (bits, p) in dist.iter() {
            rows.push(Row {
                observable: format!("p_{bits}"),
                value: Some(p),
                theory: theory_dist.as_ref().map(|t| t.get(&bits)),
                std_dev: shots.filter(|_| !mitigated).map(|s| binomial_standard_error(p, s)),
                mitigated,
                ..base.clone()
            });
        }
    }

    let document = RunDocument {
        experiment: spec.into(),
        circuit: circuit.name().to_string(),
        device: backend.label().to_string(),
        mode: if settings.exact { "exact" } else { "sampled" },
        shots,
        seed: shots.map(|_| settings.seed),
        counts: exec.counts.as_ref().map(|c| c.counts().clone()),
        distribution: to_map(&exec.distribution),
        binomial_standard_error: stderr_map,
        mitigated_distribution: exec.mitigated.as_ref().map(to_map),
        theory_distribution: theory_dist.as_ref().map(to_map),
        observable: ObservableDocument { name: obs.name(), value, mitigated_value, theory },
        fidelity,
    };
    Ok(RunResult { document, rows })
}

fn grid_specs(grid: &Grid) -> Result<Vec<ExperimentSpec>> {
    match grid {
        Grid::GeneralBomb { n_values, thetas } => {
            let mut specs = Vec::new();
            for &n in n_values {
                for &t in thetas {
                    specs.push(ExperimentSpec::GeneralBomb { thetas: AngleVector::split(n, t * PI)? });
                }
            }
            Ok(specs)
        }
        Grid::Hardy { points } => Ok(points
            .iter()
            .map(|&(a, b)| ExperimentSpec::Hardy { theta0: a * PI, theta1: b * PI })
            .collect()),
    }
}

fn sweep_point(
    index: usize,
    spec: &ExperimentSpec,
    settings: &SweepSettings,
    backend: &Backend,
) -> Result<Vec<Row>> {
    let run = &settings.run;
    let circuit = spec.build()?;
    let obs = spec.observable();
    let theory = spec.theory_value()?;
    let base = Row { observable: obs.name().into(), theory, ..Row::template(spec) };
    let mut rows =
        vec![Row { value: observable_value(obs, &ideal_distribution(&circuit)?)?, ..base.clone() }];
    let device = backend.label().to_string();

    if run.exact {
        if let Backend::Noisy { .. } = backend {
            let exec = execute(&circuit, backend, None, RandomSeed(run.seed), run.mitigate)?;
            rows.push(Row {
                value: observable_value(obs, &exec.distribution)?,
                device: device.clone(),
                ..base.clone()
            });
            if let Some(m) = &exec.mitigated {
                rows.push(Row {
                    value: observable_value(obs, m)?,
                    device: device.clone(),
                    mitigated: true,
                    ..base.clone()
                });
            }
        }
        return Ok(rows);
    }

    let mut raw = Vec::new();
    let mut mitigated = Vec::new();
    let point_seed = RandomSeed(run.seed).derive(index as u64);
    for r in 0..settings.repeats {
        let seed = point_seed.derive(r as u64);
        let exec = execute(&circuit, backend, Some(run.shots), seed, run.mitigate)?;
        raw.push((seed.0, observable_value(obs, &exec.distribution)?));
        if let Some(m) = &exec.mitigated {
            mitigated.push((seed.0, observable_value(obs, m)?));
        }
    }
    for (values, is_mitigated) in [(raw, false), (mitigated, true)] {
        if values.is_empty() {
            continue;
        }
        for &(seed, value) in &values {
            rows.push(Row {
                shots: Some(run.shots),
                seed: Some(seed),
                value,
                device: device.clone(),
                mitigated: is_mitigated,
                ..base.clone()
            });
        }
        let finite: Vec<f64> = values.iter().filter_map(|(_, v)| *v).collect();
        // Only mean and spread are reported, so any nonzero reference will do.
        let stats = if finite.is_empty() { None } else { Some(run_statistics(&finite, 1.0)?) };
        rows.push(Row {
            observable: format!("{}_mean", obs.name()),
            shots: Some(run.shots),
            seed: Some(point_seed.0),
            value: stats.map(|s| s.mean),
            std_dev: stats.map(|s| s.std_dev),
            device: device.clone(),
            mitigated: is_mitigated,
            ..base.clone()
        });
    }
    Ok(rows)
}

/// All sweep rows in grid order. Points run in parallel.
pub fn sweep(settings: &SweepSettings) -> std::result::Result<Vec<Row>, Failure> {
    let backend = Backend::resolve(&settings.run.device)?;
    let specs = grid_specs(&settings.grid)?;
    let per_point: Vec<Result<Vec<Row>>> =
        specs.par_iter().enumerate().map(|(i, spec)| sweep_point(i, spec, settings, &backend)).collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[Row]) -> std::result::Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Failure::runtime(e.to_string()))?;
    }
    if rows.is_empty() {
        writer
            .write_record([
                "experiment",
                "N",
                "theta_over_pi",
                "theta0_over_pi",
                "theta1_over_pi",
                "shots",
                "seed",
                "observable",
                "value",
                "theory",
                "std_dev",
                "device",
                "mitigated",
            ])
            .map_err(|e| Failure::runtime(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::runtime(e.to_string()))
}

pub fn render_rows(rows: &[Row], format: Format) -> std::result::Result<String, Failure> {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&serde_json::json!({ "rows": rows }))
                .map_err(|e| Failure::runtime(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_empty_cells() {
        let spec = ExperimentSpec::Bomb { present: true };
        let row = Row { observable: "eta".into(), value: Some(0.5), ..Row::template(&spec) };
        let text = rows_to_csv(&[row]).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,N,theta_over_pi,theta0_over_pi,theta1_over_pi,shots,seed,observable,value,theory,std_dev,device,mitigated"
        );
        assert_eq!(lines.next().unwrap(), "bomb,,,,,,,eta,0.5,,,ideal,false");
    }

    #[test]
    fn exact_ideal_bomb_execution() {
        let c = ExperimentSpec::Bomb { present: true }.build().unwrap();
        let e = execute(&c, &Backend::Ideal, None, RandomSeed(0), false).unwrap();
        let eta =
            observable_value(Observable::Eta(crate::analysis::EtaLabeling::SingleStage), &e.distribution)
                .unwrap()
                .unwrap();
        assert!((eta - 1.0 / 3.0).abs() < 1e-12);
    }
}
