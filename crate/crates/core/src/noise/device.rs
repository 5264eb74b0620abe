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

//! Device calibration records.
//!
//! A calibration document is JSON with the fields of [`DeviceModel`]:
//!
//! ```json
//! {
//!   "name": "vigo", "calibration_date": "08/20",
//!   "t1_us": 73.28, "t2_us": 50.73,
//!   "single_qubit_error": 0.00107,
//!   "cnot_error": 0.0107,
//!   "readout_error": 0.0166,
//!   "coupling": [[0, 1], [1, 2], [1, 3], [3, 4]],
//!   "num_qubits": 5
//! }
//! ```
//!
//! `readout_error` is either one symmetric rate applied to every qubit or a
//! list of per-qubit `[p01, p10]` pairs, where `p01 = P(read 1 | prepared 0)`.
//! `single_qubit_error` may be omitted and then defaults to a tenth of the
//! CNOT error. T1/T2 are carried as metadata only.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError {
    /// P(read 1 | prepared 0)
    pub p01: f64,
    /// P(read 0 | prepared 1)
    pub p10: f64,
}

impl ReadoutError {
    pub const fn symmetric(p: f64) -> Self {
        Self { p01: p, p10: p }
    }

    pub fn average(&self) -> f64 {
        0.5 * (self.p01 + self.p10)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceModel {
    pub name: String,
    pub calibration_date: String,
    pub t1_us: f64,
    pub t2_us: f64,
    pub single_qubit_error: f64,
    pub cnot_error: f64,
    #[serde(serialize_with = "serialize_readout")]
    pub readout_error: Vec<ReadoutError>,
    pub coupling: Vec<[usize; 2]>,
    pub num_qubits: usize,
}

fn serialize_readout<S: serde::Serializer>(v: &[ReadoutError], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&[r.p01, r.p10])?;
    }
    seq.end()
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ReadoutField {
    Uniform(f64),
    PerQubit(Vec<[f64; 2]>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceDocument {
    name: String,
    #[serde(default)]
    calibration_date: String,
    t1_us: f64,
    t2_us: f64,
    #[serde(default)]
    single_qubit_error: Option<f64>,
    cnot_error: f64,
    readout_error: ReadoutField,
    coupling: Vec<[usize; 2]>,
    num_qubits: usize,
}

fn check_rate(field: &str, v: f64) -> Result<()> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::InvalidDevice(format!("{field} = {v} is outside [0, 1)")));
    }
    Ok(())
}

impl DeviceModel {
    /// Check every invariant of a calibration record.
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::InvalidDevice("num_qubits must be positive".into()));
        }
        if !(self.t1_us > 0.0 && self.t1_us.is_finite()) || !(self.t2_us > 0.0 && self.t2_us.is_finite()) {
            return Err(Error::InvalidDevice("t1_us and t2_us must be positive".into()));
        }
        check_rate("single_qubit_error", self.single_qubit_error)?;
        check_rate("cnot_error", self.cnot_error)?;
        if self.readout_error.len() != self.num_qubits {
            return Err(Error::InvalidDevice(format!(
                "readout_error lists {} qubits, device has {}",
                self.readout_error.len(),
                self.num_qubits
            )));
        }
        for r in &self.readout_error {
            check_rate("readout_error", r.p01)?;
            check_rate("readout_error", r.p10)?;
        }
        for &[a, b] in &self.coupling {
            if a >= self.num_qubits || b >= self.num_qubits {
                return Err(Error::InvalidDevice(format!(
                    "coupling [{a}, {b}] references a qubit outside 0..{}",
                    self.num_qubits
                )));
            }
            if a == b {
                return Err(Error::InvalidDevice(format!("coupling [{a}, {b}] is a self-loop")));
            }
        }
        Ok(())
    }

    /// Parse and validate a JSON calibration document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DeviceDocument = serde_json::from_str(text)
            .map_err(|e| Error::InvalidDevice(format!("malformed calibration document: {e}")))?;
        let readout_error = match doc.readout_error {
            ReadoutField::Uniform(p) => vec![ReadoutError::symmetric(p); doc.num_qubits],
            ReadoutField::PerQubit(pairs) => {
                pairs.into_iter().map(|[p01, p10]| ReadoutError { p01, p10 }).collect()
            }
        };
        let device = DeviceModel {
            name: doc.name,
            calibration_date: doc.calibration_date,
            t1_us: doc.t1_us,
            t2_us: doc.t2_us,
            single_qubit_error: doc.single_qubit_error.unwrap_or(doc.cnot_error / 10.0),
            cnot_error: doc.cnot_error,
            readout_error,
            coupling: doc.coupling,
            num_qubits: doc.num_qubits,
        };
        device.validate()?;
        Ok(device)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("device serializes")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidDevice(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Zero-error device with all-to-all coupling.
    pub fn noiseless(num_qubits: usize) -> Self {
        let mut coupling = Vec::new();
        for a in 0..num_qubits {
            for b in a + 1..num_qubits {
                coupling.push([a, b]);
            }
        }
        DeviceModel {
            name: "ideal".into(),
            calibration_date: String::new(),
            t1_us: 1e9,
            t2_us: 1e9,
            single_qubit_error: 0.0,
            cnot_error: 0.0,
            readout_error: vec![ReadoutError::symmetric(0.0); num_qubits],
            coupling,
            num_qubits,
        }
    }

    /// Copy with the same readout error applied to every qubit.
    pub fn with_uniform_readout(mut self, readout: ReadoutError) -> Self {
        self.readout_error = vec![readout; self.num_qubits];
        self
    }

    /// Copy with every gate and readout rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut d = self.clone();
        d.single_qubit_error *= factor;
        d.cnot_error *= factor;
        for r in &mut d.readout_error {
            r.p01 *= factor;
            r.p10 *= factor;
        }
        d.validate()?;
        Ok(d)
    }

    pub fn is_noiseless(&self) -> bool {
        self.single_qubit_error == 0.0
            && self.cnot_error == 0.0
            && self.readout_error.iter().all(|r| r.p01 == 0.0 && r.p10 == 0.0)
    }
}

/// Canonical 5-qubit T layout; the centre qubit 1 touches three others.
pub const T_SHAPE: [[usize; 2]; 4] = [[0, 1], [1, 2], [1, 3], [3, 4]];
/// 5-qubit bow-tie layout: two triangles sharing qubit 2.
pub const BOWTIE: [[usize; 2]; 6] = [[0, 1], [0, 2], [1, 2], [2, 3], [2, 4], [3, 4]];

struct PresetRow {
    key: &'static str,
    name: &'static str,
    date: &'static str,
    t1_us: f64,
    t2_us: f64,
    cnot_pct: f64,
    readout_pct: f64,
    bowtie: bool,
}

// averaged calibration values, percent columns as published
const PRESETS: &[PresetRow] = &[
    PresetRow {
        key: "burlington",
        name: "Burlington",
        date: "08/20",
        t1_us: 84.88,
        t2_us: 67.36,
        cnot_pct: 1.50,
        readout_pct: 4.64,
        bowtie: false,
    },
    PresetRow {
        key: "essex",
        name: "Essex",
        date: "08/20",
        t1_us: 104.31,
        t2_us: 123.7,
        cnot_pct: 1.76,
        readout_pct: 3.59,
        bowtie: false,
    },
    PresetRow {
        key: "london",
        name: "London",
        date: "08/20",
        t1_us: 61.45,
        t2_us: 62.74,
        cnot_pct: 1.75,
        readout_pct: 4.40,
        bowtie: false,
    },
    PresetRow {
        key: "ourense",
        name: "Ourense",
        date: "08/20",
        t1_us: 93.15,
        t2_us: 66.43,
        cnot_pct: 0.92,
        readout_pct: 2.96,
        bowtie: false,
    },
    PresetRow {
        key: "valencia-08-20",
        name: "Valencia",
        date: "08/20",
        t1_us: 84.18,
        t2_us: 62.78,
        cnot_pct: 1.11,
        readout_pct: 2.32,
        bowtie: false,
    },
    PresetRow {
        key: "valencia-09-20",
        name: "Valencia",
        date: "09/20",
        t1_us: 100.00,
        t2_us: 80.49,
        cnot_pct: 1.10,
        readout_pct: 2.52,
        bowtie: false,
    },
    PresetRow {
        key: "vigo-08-20",
        name: "Vigo",
        date: "08/20",
        t1_us: 73.28,
        t2_us: 50.73,
        cnot_pct: 1.07,
        readout_pct: 1.66,
        bowtie: false,
    },
    PresetRow {
        key: "vigo-09-20",
        name: "Vigo",
        date: "09/20",
        t1_us: 107.64,
        t2_us: 74.04,
        cnot_pct: 0.94,
        readout_pct: 1.96,
        bowtie: false,
    },
    PresetRow {
        key: "x2",
        name: "x2",
        date: "08/20",
        t1_us: 57.08,
        t2_us: 45.40,
        cnot_pct: 1.82,
        readout_pct: 3.18,
        bowtie: true,
    },
];

/// Names accepted by [`preset`].
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.key).collect()
}

/// Built-in calibration record.
pub fn preset(key: &str) -> Result<DeviceModel> {
    let row = PRESETS
        .iter()
        .find(|p| p.key.eq_ignore_ascii_case(key))
        .ok_or_else(|| Error::UnknownPreset(key.to_string()))?;
    let cnot_error = row.cnot_pct / 100.0;
    let coupling = if row.bowtie { BOWTIE.to_vec() } else { T_SHAPE.to_vec() };
    let device = DeviceModel {
        name: row.key.to_string(),
        calibration_date: row.date.to_string(),
        t1_us: row.t1_us,
        t2_us: row.t2_us,
        single_qubit_error: cnot_error / 10.0,
        cnot_error,
        readout_error: vec![ReadoutError::symmetric(row.readout_pct / 100.0); 5],
        coupling,
        num_qubits: 5,
    };
    debug_assert!(device.validate().is_ok(), "{}", row.name);
    Ok(device)
}

/// Resolve `ideal`, a preset key or a path to a calibration document.
pub fn load_device(spec: &str, ideal_width: usize) -> Result<DeviceModel> {
    if spec.eq_ignore_ascii_case("ideal") {
        return Ok(DeviceModel::noiseless(ideal_width));
    }
    match preset(spec) {
        Ok(d) => Ok(d),
        Err(Error::UnknownPreset(_)) if Path::new(spec).exists() => DeviceModel::from_path(spec),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vigo_08_20() {
        let d = preset("vigo-08-20").unwrap();
        assert_eq!(d.t1_us, 73.28);
        assert_eq!(d.t2_us, 50.73);
        assert!((d.cnot_error - 0.0107).abs() < 1e-15);
        assert!((d.readout_error[0].p01 - 0.0166).abs() < 1e-15);
        assert_eq!(d.coupling, T_SHAPE.to_vec());
        assert!((d.single_qubit_error - 0.00107).abs() < 1e-15);
    }

    #[test]
    fn valencia_09_20() {
        let d = preset("valencia-09-20").unwrap();
        assert_eq!(d.t1_us, 100.0);
        assert_eq!(d.t2_us, 80.49);
        assert!((d.cnot_error - 0.0110).abs() < 1e-15);
        assert!((d.readout_error[3].p10 - 0.0252).abs() < 1e-15);
    }

    #[test]
    fn all_presets_validate() {
        assert_eq!(preset_names().len(), 9);
        for key in preset_names() {
            preset(key).unwrap().validate().unwrap();
        }
        assert!(matches!(preset("athens"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn document_round_trip() {
        let d = preset("essex").unwrap();
        let back = DeviceModel::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn uniform_readout_and_default_single_qubit_rate() {
        let doc = r#"{"name":"toy","t1_us":50,"t2_us":40,"cnot_error":0.02,
                      "readout_error":0.01,"coupling":[[0,1]],"num_qubits":2}"#;
        let d = DeviceModel::from_json(doc).unwrap();
        assert_eq!(d.readout_error, vec![ReadoutError::symmetric(0.01); 2]);
        assert!((d.single_qubit_error - 0.002).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_readout() {
        let doc = r#"{"name":"bad","t1_us":50,"t2_us":40,"cnot_error":0.02,
                      "readout_error":1.5,"coupling":[[0,1]],"num_qubits":2}"#;
        let err = DeviceModel::from_json(doc).unwrap_err();
        assert!(matches!(err, Error::InvalidDevice(ref m) if m.contains("readout_error")), "{err}");
    }

    #[test]
    fn rejects_bad_coupling_and_malformed() {
        let doc = r#"{"name":"bad","t1_us":50,"t2_us":40,"cnot_error":0.02,
                      "readout_error":0.1,"coupling":[[0,7]],"num_qubits":2}"#;
        assert!(matches!(DeviceModel::from_json(doc), Err(Error::InvalidDevice(_))));
        assert!(matches!(DeviceModel::from_json("{not json"), Err(Error::InvalidDevice(_))));
        let neg_t1 = r#"{"name":"bad","t1_us":-1,"t2_us":40,"cnot_error":0.02,
                      "readout_error":0.1,"coupling":[],"num_qubits":1}"#;
        assert!(matches!(DeviceModel::from_json(neg_t1), Err(Error::InvalidDevice(_))));
    }
}
