// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;
use serde_json::Value;

use crate::analog::{Fault, GarmentStage};
use crate::netlist::AliasMap;
use crate::session::{Event, ExerciseScore, PainAnnotations, PainScore, VoltageSample};

use super::RepAnalysis;

pub const REPORT_SCHEMA_ID: &str = "stitchsim-report/1";

/// Decimal places kept for every non-integer number in a report.
pub const REPORT_DECIMALS: i32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionMeta {
    pub circuit: String,
    pub program: String,
    pub phase: String,
    pub threshold: f64,
    pub samples: usize,
    pub duration_ms: u64,
    pub garment: GarmentStage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionReport {
    pub schema: &'static str,
    pub session: SessionMeta,
    pub exercises: Vec<ExerciseScore>,
    pub events: Vec<Event>,
    pub voltage_log: Vec<VoltageSample>,
    pub faults: Vec<Fault>,
    /// Display names of the gates in each config.
    pub gate_aliases: AliasMap,
    pub accel: Option<RepAnalysis>,
}

/// Rounds every float in place. Integers are left alone.
pub fn round_numbers(v: &mut Value, decimals: i32) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let scale = 10f64.powi(decimals);
            let mut x = (n.as_f64().unwrap_or(0.0) * scale).round() / scale;
            if x == 0.0 {
                x = 0.0;
            }
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_numbers(x, decimals)),
        Value::Object(map) => map.values_mut().for_each(|x| round_numbers(x, decimals)),
        _ => {}
    }
}

fn finish_json(mut v: Value) -> Vec<u8> {
    round_numbers(&mut v, REPORT_DECIMALS);
    let mut out = serde_json::to_vec_pretty(&v).expect("a JSON value always serializes");
    out.push(b'\n');
    out
}

/// Pretty JSON with sorted keys and rounded numbers.
pub fn emit_report_json(report: &SessionReport) -> Vec<u8> {
    finish_json(serde_json::to_value(report).expect("report types serialize"))
}

/// Sets `pain_score` on every exercise of an emitted report and returns the
/// re-emitted bytes.
pub fn apply_pain(report: &mut Value, pain: &PainAnnotations) -> Result<Vec<u8>, String> {
    let exercises = report
        .get_mut("exercises")
        .and_then(Value::as_array_mut)
        .ok_or_else(|| "report has no 'exercises' array".to_string())?;
    for e in exercises {
        let name = e
            .get("exercise")
            .and_then(Value::as_str)
            .ok_or_else(|| "exercise entry has no name".to_string())?
            .to_string();
        let score: PainScore = pain.get(&name);
        e["pain_score"] = serde_json::to_value(score).expect("pain score serializes");
    }
    Ok(finish_json(report.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_integers() {
        let mut v = json!({"a": 2.81234567, "b": 7, "c": [1.00004, -0.00001]});
        round_numbers(&mut v, 4);
        assert_eq!(v, json!({"a": 2.8123, "b": 7, "c": [1.0, 0.0]}));
        assert_eq!(serde_json::to_string(&v["c"][1]).unwrap(), "0.0");
    }

    #[test]
    fn pain_is_applied_by_name() {
        let mut v =
            json!({"exercises": [{"exercise": "wrist_flexion", "pain_score": "not_assessed"}, {"exercise": "x"}]});
        let p = PainAnnotations::from_toml("wrist_flexion = 2").unwrap();
        let bytes = apply_pain(&mut v, &p).unwrap();
        let back: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back["exercises"][0]["pain_score"], json!(2));
        assert_eq!(back["exercises"][1]["pain_score"], json!("not_assessed"));
        assert!(apply_pain(&mut json!({}), &p).is_err());
    }
}
