// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn reference_circuit() -> PathBuf {
    root().join("crates/core/assets/exosuit_v1.scx")
}

pub fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

/// Runs the binary with `STITCHSIM_DEFAULTS` cleared.
pub fn stitchsim<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_stitchsim"))
        .args(args)
        .env_remove("STITCHSIM_DEFAULTS")
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

/// Movement CSV from `(t_ms, [ctrl_wrist, ctrl_elbow, ex_wrist, ex_elbow, ex_finger, ex_thumb], palm)` rows.
pub fn movement_csv(rows: &[(u64, [f64; 6], bool)]) -> String {
    let mut out = String::from("t_ms,ctrl_wrist,ctrl_elbow,ex_wrist,ex_elbow,ex_finger,ex_thumb,palm\n");
    for (t, a, palm) in rows {
        let cells: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{t},{},{}\n", cells.join(","), *palm as u8));
    }
    out
}

pub fn report_schema() -> jsonschema::JSONSchema {
    let schema: Value =
        serde_json::from_slice(&std::fs::read(root().join("schemas/report.schema.json")).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

pub fn schema_errors(schema: &jsonschema::JSONSchema, v: &Value) -> Vec<String> {
    match schema.validate(v) {
        Ok(()) => vec![],
        Err(errs) => errs.map(|e| format!("{}: {e}", e.instance_path)).collect(),
    }
}
