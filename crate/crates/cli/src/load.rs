// SPDX-License-Identifier: Apache-2.0

//! Reading circuits, traces and settings named on the command line.

use std::fs::File;
use std::path::{Path, PathBuf};

use stitchsim_core::analog::{CalibrationReadings, Fault, GateModelSet};
use stitchsim_core::defaults::Defaults;
use stitchsim_core::dsl::{parse_circuit, CircuitAst, SourceText};
use stitchsim_core::netlist::{elaborate, Netlist};
use stitchsim_core::session::{ExerciseProgram, PainAnnotations, ScoreExpectation};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn source(path: &Path) -> CliResult<SourceText> {
    SourceText::from_file(path).map_err(|e| CliError::io(path, e))
}

/// Parses a circuit, printing diagnostics to stderr on failure.
pub fn circuit(path: &Path) -> CliResult<CircuitAst> {
    let src = source(path)?;
    parse_circuit(&src).map_err(|diags| {
        eprintln!("{diags}");
        let n = diags.errors().count();
        CliError::Domain(format!("{}: {n} error(s)", src.origin))
    })
}

pub fn netlist(path: &Path) -> CliResult<Netlist> {
    elaborate(&circuit(path)?).map_err(CliError::domain)
}

pub fn defaults() -> CliResult<Defaults> {
    Defaults::load().map_err(CliError::usage)
}

pub fn threshold(flag: Option<f64>, defaults: &Defaults) -> CliResult<f64> {
    match flag {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(CliError::Usage(format!("--threshold {t} must be positive"))),
        Some(t) => Ok(t),
        None => Ok(defaults.threshold),
    }
}

/// Reference gate models, or a fit to `calibration` taken on `netlist`.
pub fn models(calibration: Option<&PathBuf>, netlist: &Netlist, defaults: &Defaults) -> CliResult<GateModelSet> {
    let Some(path) = calibration else { return Ok(GateModelSet::reference()) };
    let readings = CalibrationReadings::from_csv(open(path)?).map_err(CliError::domain)?;
    let models = GateModelSet::fit(&readings, netlist, &defaults.aliases).map_err(CliError::domain)?;
    models.check().map_err(CliError::domain)?;
    Ok(models)
}

pub fn faults(specs: &[String]) -> CliResult<Vec<Fault>> {
    specs.iter().map(|s| s.parse::<Fault>().map_err(|e| CliError::Usage(format!("--inject {s}: {e}")))).collect()
}

/// A preset name, or a TOML file when the argument names one.
pub fn program(arg: &str) -> CliResult<ExerciseProgram> {
    let path = Path::new(arg);
    if path.extension().is_some_and(|e| e == "toml") || path.is_file() {
        ExerciseProgram::from_toml(&read_text(path)?).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
    } else {
        ExerciseProgram::preset(arg).map_err(CliError::usage)
    }
}

pub fn pain(path: &Path) -> CliResult<PainAnnotations> {
    PainAnnotations::from_toml(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn expectation(spec: &str) -> CliResult<ScoreExpectation> {
    spec.parse().map_err(|e| CliError::Usage(format!("--expect {spec}: {e}")))
}
