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

//! Config documents and flag merging. Angles are in units of π.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::Failure;
use crate::experiments::{AngleVector, ExperimentSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Eraser,
    Bomb,
    #[value(name = "general-bomb", alias = "general_bomb")]
    GeneralBomb,
    Hardy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Experiment parameters as they appear in a config file or on the
/// command line. Every field is optional so the two sources can be merged.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentParams {
    pub kind: Option<ExperimentKind>,
    pub erase: Option<bool>,
    pub present: Option<bool>,
    pub n: Option<usize>,
    pub theta_over_pi: Option<f64>,
    pub thetas_over_pi: Option<Vec<f64>>,
    pub theta0_over_pi: Option<f64>,
    pub theta1_over_pi: Option<f64>,
}

impl ExperimentParams {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: ExperimentParams) -> ExperimentParams {
        ExperimentParams {
            kind: self.kind.or(base.kind),
            erase: self.erase.or(base.erase),
            present: self.present.or(base.present),
            n: self.n.or(base.n),
            theta_over_pi: self.theta_over_pi.or(base.theta_over_pi),
            thetas_over_pi: self.thetas_over_pi.or(base.thetas_over_pi),
            theta0_over_pi: self.theta0_over_pi.or(base.theta0_over_pi),
            theta1_over_pi: self.theta1_over_pi.or(base.theta1_over_pi),
        }
    }

    pub fn resolve(&self) -> Result<ExperimentSpec, Failure> {
        let kind = self.kind.ok_or_else(|| Failure::usage("no experiment selected (use --experiment)"))?;
        let spec = match kind {
            ExperimentKind::Eraser => ExperimentSpec::Eraser { erase: self.erase.unwrap_or(false) },
            ExperimentKind::Bomb => ExperimentSpec::Bomb { present: self.present.unwrap_or(true) },
            ExperimentKind::GeneralBomb => {
                let thetas = match (&self.thetas_over_pi, self.n) {
                    (Some(list), _) => AngleVector::new(list.iter().map(|t| t * PI).collect())?,
                    (None, Some(n)) => match self.theta_over_pi {
                        Some(t) => AngleVector::split(n, t * PI)?,
                        None => AngleVector::equal(n)?,
                    },
                    (None, None) => {
                        return Err(Failure::usage("general bomb needs --n or --thetas"));
                    }
                };
                if let Some(n) = self.n {
                    if n != thetas.len() {
                        return Err(Failure::usage(format!(
                            "--n {n} disagrees with {} listed angles",
                            thetas.len()
                        )));
                    }
                }
                ExperimentSpec::GeneralBomb { thetas }
            }
            ExperimentKind::Hardy => {
                let t0 = self.theta0_over_pi.or(self.theta_over_pi);
                let t1 = self.theta1_over_pi.or(self.theta_over_pi);
                match (t0, t1) {
                    (Some(a), Some(b)) => ExperimentSpec::Hardy { theta0: a * PI, theta1: b * PI },
                    _ => return Err(Failure::usage("hardy needs --theta0 and --theta1 (or --theta)")),
                }
            }
        };
        spec.build()?;
        Ok(spec)
    }
}

/// Inclusive `start:stop:step` grid in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn parse(text: &str) -> Result<Range, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got `{text}`"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        Ok(Range { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? })
    }

    pub fn points(&self) -> Result<Vec<f64>, Failure> {
        if !self.step.is_finite() || self.step <= 0.0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Failure::usage("range step must be positive and bounds finite"));
        }
        if self.stop < self.start {
            return Ok(Vec::new());
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        // Rounding keeps `0.55 + 0.05` printing as 0.6.
        Ok((0..count).map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12).collect())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub n_values: Option<Vec<usize>>,
    pub theta: Option<Range>,
    pub theta0: Option<Range>,
    pub theta1: Option<Range>,
    pub diagonal: Option<bool>,
    pub repeats: Option<usize>,
}

/// Top-level config document.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub experiment: ExperimentParams,
    pub device: Option<String>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub mitigate: Option<bool>,
    pub exact: Option<bool>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub sweep: SweepParams,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, Failure> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved single-run settings.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub spec: ExperimentSpec,
    pub device: String,
    pub shots: u64,
    pub seed: u64,
    pub mitigate: bool,
    pub exact: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub enum Grid {
    GeneralBomb { n_values: Vec<usize>, thetas: Vec<f64> },
    Hardy { points: Vec<(f64, f64)> },
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::GeneralBomb { n_values, thetas } => n_values.len() * thetas.len(),
            Grid::Hardy { points } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub run: RunSettings,
    pub grid: Grid,
    pub repeats: usize,
}

pub const DEFAULT_SHOTS: u64 = 8192;

pub fn settings(
    file: ConfigFile,
    flags: ExperimentParams,
    common: &super::CommonArgs,
    default_format: Format,
    sweep: Option<SweepParams>,
) -> Result<(ExperimentParams, RunSettings, SweepParams), Failure> {
    let params = flags.over(file.experiment);
    let shots = common.shots.or(file.shots).unwrap_or(DEFAULT_SHOTS);
    if shots == 0 {
        return Err(Failure::usage("shots must be at least 1"));
    }
    let sweep_params = match sweep {
        Some(s) => SweepParams {
            n_values: s.n_values.or(file.sweep.n_values),
            theta: s.theta.or(file.sweep.theta),
            theta0: s.theta0.or(file.sweep.theta0),
            theta1: s.theta1.or(file.sweep.theta1),
            diagonal: s.diagonal.or(file.sweep.diagonal),
            repeats: s.repeats.or(file.sweep.repeats),
        },
        None => file.sweep,
    };
    let placeholder = ExperimentSpec::Eraser { erase: false };
    let run = RunSettings {
        spec: placeholder,
        device: common.device.clone().or(file.device).unwrap_or_else(|| "ideal".into()),
        shots,
        seed: common.seed.or(file.seed).unwrap_or(0),
        mitigate: common.mitigate || file.mitigate.unwrap_or(false),
        exact: common.exact || file.exact.unwrap_or(false),
        format: common.format.or(file.format).unwrap_or(default_format),
        output: common.output.clone().or(file.output),
    };
    Ok((params, run, sweep_params))
}

pub fn sweep_grid(params: &ExperimentParams, sweep: &SweepParams) -> Result<Grid, Failure> {
    let kind = params.kind.ok_or_else(|| Failure::usage("no experiment selected (use --experiment)"))?;
    let grid = match kind {
        ExperimentKind::GeneralBomb => {
            let n_values = sweep
                .n_values
                .clone()
                .or_else(|| params.n.map(|n| vec![n]))
                .ok_or_else(|| Failure::usage("general-bomb sweep needs --n-values"))?;
            if let Some(&bad) = n_values.iter().find(|&&n| n < 2) {
                return Err(Failure::usage(format!("N = {bad} is below 2")));
            }
            let range =
                sweep.theta.ok_or_else(|| Failure::usage("general-bomb sweep needs --theta-range"))?;
            Grid::GeneralBomb { n_values, thetas: range.points()? }
        }
        ExperimentKind::Hardy => {
            let check = |v: &[f64]| -> Result<(), Failure> {
                match v.iter().find(|t| !(0.0..=1.0 + 1e-12).contains(*t)) {
                    Some(t) => Err(Failure::usage(format!("hardy angle {t}π outside [0, π]"))),
                    None => Ok(()),
                }
            };
            if sweep.diagonal.unwrap_or(false) {
                let range =
                    sweep.theta.ok_or_else(|| Failure::usage("diagonal hardy sweep needs --theta-range"))?;
                let pts = range.points()?;
                check(&pts)?;
                Grid::Hardy { points: pts.iter().map(|&t| (t, t)).collect() }
            } else {
                let r0 = sweep
                    .theta0
                    .or(sweep.theta)
                    .ok_or_else(|| Failure::usage("hardy sweep needs --theta0-range"))?;
                let r1 = sweep
                    .theta1
                    .or(sweep.theta)
                    .ok_or_else(|| Failure::usage("hardy sweep needs --theta1-range"))?;
                let (p0, p1) = (r0.points()?, r1.points()?);
                check(&p0)?;
                check(&p1)?;
                Grid::Hardy { points: p0.iter().flat_map(|&a| p1.iter().map(move |&b| (a, b))).collect() }
            }
        }
        other => return Err(Failure::usage(format!("sweeps support general-bomb and hardy, not {other:?}"))),
    };
    if grid.is_empty() {
        return Err(Failure::usage("sweep grid is empty"));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_points_include_stop() {
        let r = Range::parse("0.05:0.95:0.05").unwrap();
        let p = r.points().unwrap();
        assert_eq!(p.len(), 19);
        assert!((p[18] - 0.95).abs() < 1e-12);
        assert!(Range { start: 1.0, stop: 0.0, step: 0.1 }.points().unwrap().is_empty());
        assert!(Range::parse("1:2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ExperimentParams {
            kind: Some(ExperimentKind::Hardy),
            theta0_over_pi: Some(0.5),
            theta1_over_pi: Some(0.5),
            ..Default::default()
        };
        let flags = ExperimentParams { theta0_over_pi: Some(0.25), ..Default::default() };
        match flags.over(file).resolve().unwrap() {
            ExperimentSpec::Hardy { theta0, theta1 } => {
                assert!((theta0 - PI / 4.0).abs() < 1e-15);
                assert!((theta1 - PI / 2.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn general_bomb_resolution() {
        let p = ExperimentParams {
            kind: Some(ExperimentKind::GeneralBomb),
            n: Some(3),
            theta_over_pi: Some(0.6),
            ..Default::default()
        };
        match p.resolve().unwrap() {
            ExperimentSpec::GeneralBomb { thetas } => {
                assert_eq!(thetas.len(), 3);
                assert!((thetas.as_slice()[2] - 0.6 * PI).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let bad = ExperimentParams {
            kind: Some(ExperimentKind::GeneralBomb),
            thetas_over_pi: Some(vec![0.5, 0.6]),
            ..Default::default()
        };
        assert_eq!(bad.resolve().unwrap_err().code(), 2);
    }
}
