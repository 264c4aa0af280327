// SPDX-License-Identifier: Apache-2.0

use stitchsim_core::pipeline::Simulator;
use stitchsim_core::session::ExerciseScore;
use stitchsim_core::trace::synth::{program_traces, SynthConfig};
use stitchsim_core::trace::{count_reps_accel, emit_report_json, parse_accel_csv, parse_movement_csv};

use super::score::print_scores;
use crate::error::{CliError, CliResult};
use crate::output::print_bytes;
use crate::{load, SimulateArgs};

pub fn run(args: &SimulateArgs) -> CliResult {
    let netlist = load::netlist(&args.circuit)?;
    let defaults = load::defaults()?;
    let threshold = load::threshold(args.threshold, &defaults)?;
    let models = load::models(args.calibration.as_ref(), &netlist, &defaults)?;
    let faults = load::faults(&args.inject)?;
    let program = load::program(&args.program)?;
    let pain = args.pain.as_deref().map(load::pain).transpose()?;
    let expect = args.expect.as_deref().map(load::expectation).transpose()?;

    let mut sim = Simulator::new(&netlist, &defaults, models)
        .map_err(CliError::domain)?
        .with_faults(faults)
        .map_err(CliError::usage)?;
    sim.threshold = threshold;

    let (movement, generated_accel) = match &args.trace {
        Some(path) => {
            let t = parse_movement_csv(load::open(path)?)
                .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
            (t, None)
        }
        None => {
            let t = program_traces(&program, &sim.specs, &sim.rom, &SynthConfig::default());
            (t.movement, Some(t.accel))
        }
    };
    let accel_trace = match &args.accel {
        Some(path) => {
            Some(parse_accel_csv(load::open(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?)
        }
        None => generated_accel,
    };
    let accel = accel_trace.map(|a| count_reps_accel(&a, defaults.accel.min_prominence, defaults.accel.refractory_ms));

    let state = sim.run(&program, &movement).map_err(CliError::domain)?;
    let report = sim.report(&state, &movement, pain.as_ref(), accel).map_err(CliError::domain)?;
    let bytes = emit_report_json(&report);
    if let Some(path) = &args.report {
        load::write_file(path, &bytes)?;
    }

    if args.out.json {
        print_bytes(&bytes);
    } else {
        println!(
            "program {}: {} ({} of {} blocks entered, {} samples)",
            report.session.program,
            report.session.phase,
            report.exercises.len(),
            program.blocks.len(),
            report.session.samples
        );
        if !report.faults.is_empty() {
            let f: Vec<String> = report.faults.iter().map(ToString::to_string).collect();
            println!("faults: {}", f.join(", "));
        }
        print_scores(report.exercises.iter().map(summary));
        if let Some(a) = &report.accel {
            let led: usize = report.exercises.iter().map(|e| e.rep_count).sum();
            println!("accelerometer reps: {} (LED reps: {led})", a.reps);
        }
    }

    if let Some(e) = expect {
        let scores: Vec<(String, u8)> = report.exercises.iter().map(|x| (x.exercise.clone(), x.motion_score)).collect();
        let short = e.shortfalls(&scores);
        if !short.is_empty() {
            return Err(CliError::Domain(format!("score below expectation: {}", short.join("; "))));
        }
    }
    Ok(())
}

/// Display row for one exercise.
pub struct ScoreRow {
    pub exercise: String,
    pub selection: String,
    pub reps: String,
    pub attempts: String,
    pub volts: String,
    pub motion: String,
    pub pain: String,
}

fn summary(e: &ExerciseScore) -> ScoreRow {
    let pain = serde_json::to_value(e.pain_score).map(|v| v.to_string().trim_matches('"').to_string());
    ScoreRow {
        exercise: e.exercise.clone(),
        selection: e.selection.to_string(),
        reps: format!("{}/{}", e.rep_count, e.target_reps),
        attempts: e.attempts.to_string(),
        volts: e.voltage.map_or("-".into(), |v| format!("{:.2}-{:.2}", v.min, v.max)),
        motion: e.motion_score.to_string(),
        pain: pain.unwrap_or_default(),
    }
}
