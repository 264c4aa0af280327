// SPDX-License-Identifier: Apache-2.0

//! Exercise session state machine and Fugl-Meyer style scoring.
//!
//! A session runs calibration, then each exercise block in order: wait for the
//! block's circuit selection, count repetitions from the LED output, close the
//! block at its target count. [`finish`] turns the ledger into an [`FmReport`].

mod engine;
mod program;
mod score;

use thiserror::Error;

pub use engine::{
    begin_session, Attempt, BlockLedger, BlockStatus, Event, EventKind, Observation, Phase, Rep, SessionState,
    VoltageSample,
};
pub use program::{
    load_task_scenario, ControlRequirement, ExerciseBlock, ExerciseProgram, ExerciseSensor, TaskScenario, TASK_NAMES,
};
pub use score::{finish, ExerciseScore, FmReport, PainAnnotations, PainScore, ScoreExpectation, VoltageRange};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("exercise program has no blocks")]
    EmptyProgram,
    #[error("invalid exercise program: {0}")]
    InvalidProgram(String),
    #[error("unknown task scenario '{0}'")]
    UnknownTask(String),
    #[error("time went backwards: sample at {t_ms} ms after {prev_ms} ms")]
    TimeRegression { prev_ms: u64, t_ms: u64 },
    #[error("session already ended ({0})")]
    Ended(Phase),
    #[error("session is still running ({0})")]
    NotFinished(Phase),
    #[error("pain annotations: {0}")]
    Pain(String),
    #[error("score expectation: {0}")]
    InvalidExpectation(String),
}
