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

//! Malformed OpenQASM corpus: every file must fail with the recorded
//! diagnostic class and position.

use std::collections::BTreeMap;
use std::path::PathBuf;

use qexp_core::qasm::{parse, QasmError};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

#[test]
fn every_malformed_file_reports_its_position() {
    let manifest: BTreeMap<String, (String, usize, usize)> =
        serde_json::from_str(&std::fs::read_to_string(data_dir().join("malformed_expected.json")).unwrap())
            .unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(data_dir().join("malformed")).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let (kind, line, column) =
            manifest.get(&stem).unwrap_or_else(|| panic!("{stem} missing from manifest"));
        let err = parse(&std::fs::read_to_string(&path).unwrap()).expect_err(&stem);
        let got_kind = match err {
            QasmError::Syntax(_) => "syntax",
            QasmError::Semantic { .. } => "semantic",
            QasmError::Emit(_) => "emit",
        };
        assert_eq!(got_kind, kind, "{stem}: {err}");
        assert_eq!(err.position(), Some((*line, *column)), "{stem}: {err}");
        assert!(!err.detail().is_empty());
        seen += 1;
    }
    assert_eq!(seen, manifest.len());
    assert!(seen >= 20);
}

#[test]
fn corpus_files_parse_once_repaired() {
    let fixed = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";
    assert!(parse(fixed).is_ok());
}
