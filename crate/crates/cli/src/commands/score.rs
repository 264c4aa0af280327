// SPDX-License-Identifier: Apache-2.0

use serde_json::Value;
use stitchsim_core::trace::apply_pain;

use super::simulate::ScoreRow;
use crate::error::{CliError, CliResult};
use crate::output::{print_bytes, Table};
use crate::{load, ScoreArgs};

pub fn print_scores(rows: impl Iterator<Item = ScoreRow>) {
    let mut t = Table::new(&["exercise", "circuit", "reps", "attempts", "volts", "motion", "pain"]);
    for r in rows {
        t.row(vec![r.exercise, r.selection, r.reps, r.attempts, r.volts, r.motion, r.pain]);
    }
    print!("{}", t.render());
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn row(e: &Value) -> ScoreRow {
    let volts =
        match (e.pointer("/voltage/min").and_then(Value::as_f64), e.pointer("/voltage/max").and_then(Value::as_f64)) {
            (Some(lo), Some(hi)) => format!("{lo:.2}-{hi:.2}"),
            _ => "-".into(),
        };
    ScoreRow {
        exercise: cell(&e["exercise"]),
        selection: cell(&e["selection"]),
        reps: format!("{}/{}", cell(&e["rep_count"]), cell(&e["target_reps"])),
        attempts: cell(&e["attempts"]),
        volts,
        motion: cell(&e["motion_score"]),
        pain: cell(&e["pain_score"]),
    }
}

pub fn run(args: &ScoreArgs) -> CliResult {
    let text = load::read_text(&args.session)?;
    let mut report: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(format!("{}: not a session report: {e}", args.session.display())))?;
    let expect = args.expect.as_deref().map(load::expectation).transpose()?;
    let bytes = match &args.pain {
        Some(p) => {
            let pain = load::pain(p)?;
            let out = apply_pain(&mut report, &pain).map_err(CliError::Domain)?;
            report = serde_json::from_slice(&out).expect("just emitted");
            out
        }
        None => crate::output::json_bytes(&report),
    };
    let exercises = report
        .get("exercises")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Domain(format!("{}: report has no exercises", args.session.display())))?;
    if let Some(path) = &args.report {
        load::write_file(path, &bytes)?;
    }
    if args.out.json {
        print_bytes(&bytes);
    } else {
        println!("program {}: {}", cell(&report["session"]["program"]), cell(&report["session"]["phase"]));
        print_scores(exercises.iter().map(row));
    }
    if let Some(e) = expect {
        let scores: Vec<(String, u8)> =
            exercises.iter().map(|x| (cell(&x["exercise"]), x["motion_score"].as_u64().unwrap_or(0) as u8)).collect();
        let short = e.shortfalls(&scores);
        if !short.is_empty() {
            return Err(CliError::Domain(format!("score below expectation: {}", short.join("; "))));
        }
    }
    Ok(())
}
