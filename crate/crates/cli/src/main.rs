// SPDX-License-Identifier: Apache-2.0

//! `stitchsim`: check, simulate and diagnose layered textile logic circuits.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod load;
mod output;

#[derive(Debug, Parser)]
#[command(name = "stitchsim", version, about = "Textile logic circuit compiler and exercise-session simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct JsonFlag {
    /// Print machine-readable JSON on stdout instead of text tables.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a circuit and run the design-rule checks.
    Check(CheckArgs),
    /// Enumerate each config's truth table and verify it against the declared one.
    Truthtable(TruthtableArgs),
    /// Run an exercise program over a movement trace and score it.
    Simulate(SimulateArgs),
    /// Inject faults into one config and optionally localize them.
    Fault(FaultArgs),
    /// Replace a patch with another gate kind and re-verify the truth tables.
    Swap(SwapArgs),
    /// Count repetitions in an accelerometer trace.
    Accel(AccelArgs),
    /// Merge pain annotations into a session report and check scores.
    Score(ScoreArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Circuit description (.scx).
    pub circuit: PathBuf,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct TruthtableArgs {
    /// Circuit description (.scx).
    pub circuit: PathBuf,
    /// Only this config; all configs when omitted.
    #[arg(long)]
    pub config: Option<String>,
    /// Bench calibration CSV used to fit gate models (shipped table by default).
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    /// Quantization threshold in volts for the analog column.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit description (.scx) with configs circuit1 and circuit2.
    pub circuit: PathBuf,
    /// Movement CSV; a scripted trace for the program is generated when omitted.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Accelerometer CSV recorded alongside the movement trace.
    #[arg(long)]
    pub accel: Option<PathBuf>,
    /// Program preset (paper_s4, lift_bag, lift_bottle, hold_towel, lift_can) or a TOML file.
    #[arg(long, default_value = "paper_s4")]
    pub program: String,
    /// Fault to inject, `kind:subject[:droop]`; repeatable.
    #[arg(long = "inject", value_name = "SPEC")]
    pub inject: Vec<String>,
    /// LED threshold in volts (default 2.0).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Write the JSON session report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Minimum motion scores, e.g. `all=2` or `finger_flexion=1`; exit 1 when unmet.
    #[arg(long, value_name = "SCORE-SPEC")]
    pub expect: Option<String>,
    /// Pain annotations (TOML, exercise = 1 or 2).
    #[arg(long)]
    pub pain: Option<PathBuf>,
    /// Bench calibration CSV used to fit gate models.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct FaultArgs {
    /// Circuit description (.scx).
    pub circuit: PathBuf,
    /// Config to analyse.
    #[arg(long)]
    pub config: String,
    /// Fault to inject, `kind:subject[:droop]`; repeatable.
    #[arg(long = "inject", value_name = "SPEC")]
    pub inject: Vec<String>,
    /// List single faults whose signature matches the observed table.
    #[arg(long)]
    pub diagnose: bool,
    /// Observed output bits for rows 00,01,10,11, e.g. `0010`; defaults to the faulted table.
    #[arg(long, value_name = "BITS")]
    pub observed: Option<String>,
    /// Bench calibration CSV used to fit gate models.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct SwapArgs {
    /// Circuit description (.scx).
    pub circuit: PathBuf,
    /// Patch to replace.
    #[arg(long)]
    pub patch: String,
    /// New gate kind: NOT, AND or OR.
    #[arg(long)]
    pub kind: String,
    /// Only verify this config; all configs when omitted.
    #[arg(long)]
    pub config: Option<String>,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct AccelArgs {
    /// Accelerometer CSV (`t_ms,ax,ay,az`, in g).
    pub accel: PathBuf,
    /// Minimum peak prominence in g (default 0.2).
    #[arg(long)]
    pub min_prominence: Option<f64>,
    /// Minimum time between counted peaks in ms (default 500).
    #[arg(long)]
    pub refractory_ms: Option<u64>,
    #[command(flatten)]
    pub out: JsonFlag,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Session report written by `simulate --report`.
    pub session: PathBuf,
    /// Pain annotations (TOML, exercise = 1 or 2).
    #[arg(long)]
    pub pain: Option<PathBuf>,
    /// Minimum motion scores, e.g. `all=2`; exit 1 when unmet.
    #[arg(long, value_name = "SCORE-SPEC")]
    pub expect: Option<String>,
    /// Write the merged report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub out: JsonFlag,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => commands::check::run(a),
        Command::Truthtable(a) => commands::truthtable::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Fault(a) => commands::fault::run(a),
        Command::Swap(a) => commands::swap::run(a),
        Command::Accel(a) => commands::accel::run(a),
        Command::Score(a) => commands::score::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
