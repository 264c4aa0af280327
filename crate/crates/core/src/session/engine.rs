// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::analog::{quantize, DEFAULT_THRESHOLD};
use crate::kinematics::{Joint, Motion, RomViolation, Selection};

use super::{ExerciseProgram, SessionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Calibration,
    Selecting(usize),
    Exercising(usize),
    Complete,
    Aborted,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Calibration => "Calibration",
            Phase::Selecting(_) => "Selecting",
            Phase::Exercising(_) => "Exercising",
            Phase::Complete => "Complete",
            Phase::Aborted => "Aborted",
        }
    }

    pub fn is_final(self) -> bool {
        matches!(self, Phase::Complete | Phase::Aborted)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Selecting(i) | Phase::Exercising(i) => write!(f, "{}({i})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// What the session sees at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub t_ms: u64,
    pub selection: Selection,
    /// Cluster tags enabled by the selection.
    pub clusters: Vec<u8>,
    /// Exercise inputs (A, B); (0, 0) when no circuit is selected.
    pub inputs: (bool, bool),
    pub output_volts: f64,
    pub rom_violations: Vec<RomViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub t_ms: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventKind {
    CalibrationOk,
    SelectionChanged { selection: Selection, clusters: Vec<u8> },
    InvalidSelection,
    SelectionHeld { block: usize, selection: Selection },
    ExercisingEntered { block: usize, exercise: String },
    LedOn { volts: f64 },
    LedOff { volts: f64 },
    RepCounted { block: usize, rep: usize, t_rise_ms: u64, t_fall_ms: u64, peak_volts: f64 },
    LedOffAtPeak { block: usize, attempt: usize, peak_volts: f64 },
    WindowOverrun { block: usize, elapsed_s: f64 },
    BlockAborted { block: usize, reason: String },
    BlockComplete { block: usize, reps: usize },
    RomViolation { joint: Joint, motion: Motion, angle: f64, limit: f64 },
    SessionComplete,
    SessionAborted { phase: String },
}

/// One LED rise/fall pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rep {
    pub t_rise_ms: u64,
    pub t_fall_ms: u64,
    pub peak_volts: f64,
}

/// One excursion of the exercise inputs into the block's target pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Attempt {
    pub t_start_ms: u64,
    pub t_end_ms: u64,
    pub peak_volts: f64,
    pub led_on: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    Pending,
    Active,
    Complete,
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockLedger {
    pub status: BlockStatus,
    pub t_enter_ms: Option<u64>,
    pub t_exit_ms: Option<u64>,
    pub reps: Vec<Rep>,
    pub attempts: Vec<Attempt>,
    pub window_overrun: bool,
    #[serde(skip)]
    open_rep: Option<(u64, f64)>,
    #[serde(skip)]
    open_attempt: Option<Attempt>,
}

impl BlockLedger {
    fn new() -> Self {
        Self {
            status: BlockStatus::Pending,
            t_enter_ms: None,
            t_exit_ms: None,
            reps: Vec::new(),
            attempts: Vec::new(),
            window_overrun: false,
            open_rep: None,
            open_attempt: None,
        }
    }

    pub fn entered(&self) -> bool {
        self.status != BlockStatus::Pending
    }
}

/// A change in output voltage or selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VoltageSample {
    pub t_ms: u64,
    pub selection: Selection,
    pub volts: f64,
    pub led: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    pub program: ExerciseProgram,
    pub threshold: f64,
    pub phase: Phase,
    pub blocks: Vec<BlockLedger>,
    pub led: bool,
    pub selection: Selection,
    pub events: Vec<Event>,
    pub voltage_log: Vec<VoltageSample>,
    last_t: Option<u64>,
    violating: BTreeSet<(Joint, bool)>,
}

pub fn begin_session(program: ExerciseProgram) -> Result<SessionState, SessionError> {
    SessionState::new(program, DEFAULT_THRESHOLD)
}

impl SessionState {
    pub fn new(program: ExerciseProgram, threshold: f64) -> Result<Self, SessionError> {
        program.check()?;
        let blocks = program.blocks.iter().map(|_| BlockLedger::new()).collect();
        Ok(Self {
            program,
            threshold,
            phase: Phase::Calibration,
            blocks,
            led: false,
            selection: Selection::None,
            events: Vec::new(),
            voltage_log: Vec::new(),
            last_t: None,
            violating: BTreeSet::new(),
        })
    }

    /// Block whose settings currently apply.
    pub fn current_block(&self) -> Option<usize> {
        match self.phase {
            Phase::Selecting(i) | Phase::Exercising(i) => Some(i),
            _ => None,
        }
    }

    /// Advances the session by one sample and returns the events it raised.
    pub fn step(&mut self, obs: &Observation) -> Result<Vec<Event>, SessionError> {
        if self.phase.is_final() {
            return Err(SessionError::Ended(self.phase));
        }
        if let Some(prev) = self.last_t {
            if obs.t_ms < prev {
                return Err(SessionError::TimeRegression { prev_ms: prev, t_ms: obs.t_ms });
            }
        }
        self.last_t = Some(obs.t_ms);
        let first_event = self.events.len();
        let t = obs.t_ms;
        let led = quantize(obs.output_volts, self.threshold);

        self.log_voltage(obs, led);
        self.track_rom(obs);

        if obs.selection != self.selection {
            self.selection = obs.selection;
            self.emit(t, EventKind::SelectionChanged { selection: obs.selection, clusters: obs.clusters.clone() });
            if obs.selection == Selection::InvalidBoth {
                self.emit(t, EventKind::InvalidSelection);
            }
        }

        let was_led = self.led;
        if led != was_led {
            self.led = led;
            let volts = obs.output_volts;
            self.emit(t, if led { EventKind::LedOn { volts } } else { EventKind::LedOff { volts } });
        }

        match self.phase {
            Phase::Calibration => {
                if obs.selection == Selection::None && obs.inputs == (false, false) && !led {
                    self.emit(t, EventKind::CalibrationOk);
                    self.phase = Phase::Selecting(0);
                }
            }
            Phase::Selecting(i) => self.try_enter(i, obs, led, was_led),
            Phase::Exercising(i) => self.exercise(i, obs, led, was_led),
            Phase::Complete | Phase::Aborted => unreachable!("checked above"),
        }
        Ok(self.events[first_event..].to_vec())
    }

    fn try_enter(&mut self, i: usize, obs: &Observation, led: bool, was_led: bool) {
        let block = &self.program.blocks[i];
        if obs.selection != block.selection {
            return;
        }
        let t = obs.t_ms;
        let selection = block.selection;
        let exercise = block.exercise.clone();
        self.emit(t, EventKind::SelectionHeld { block: i, selection });
        self.emit(t, EventKind::ExercisingEntered { block: i, exercise });
        let ledger = &mut self.blocks[i];
        ledger.status = BlockStatus::Active;
        ledger.t_enter_ms = Some(t);
        if led && !was_led {
            ledger.open_rep = Some((t, obs.output_volts));
        }
        self.phase = Phase::Exercising(i);
        self.track_attempt(i, obs, led);
    }

    fn exercise(&mut self, i: usize, obs: &Observation, led: bool, was_led: bool) {
        let t = obs.t_ms;
        let block = &self.program.blocks[i];
        if obs.selection != block.selection {
            let reason = format!("selection changed to {}", obs.selection);
            self.close_block(i, t, BlockStatus::Aborted);
            self.emit(t, EventKind::BlockAborted { block: i, reason });
            self.advance(i, t);
            return;
        }

        let window_ms = block.window_s.1 * 1000.0;
        let ledger = &mut self.blocks[i];
        let elapsed = t - ledger.t_enter_ms.unwrap_or(t);
        if !ledger.window_overrun && elapsed as f64 > window_ms {
            ledger.window_overrun = true;
            self.emit(t, EventKind::WindowOverrun { block: i, elapsed_s: elapsed as f64 / 1000.0 });
        }

        let ledger = &mut self.blocks[i];
        match (was_led, led, ledger.open_rep) {
            (false, true, _) => ledger.open_rep = Some((t, obs.output_volts)),
            (true, true, Some((start, peak))) => ledger.open_rep = Some((start, peak.max(obs.output_volts))),
            (true, false, Some((start, peak))) => {
                ledger.open_rep = None;
                let rep = Rep { t_rise_ms: start, t_fall_ms: t, peak_volts: peak };
                ledger.reps.push(rep);
                let n = ledger.reps.len();
                self.emit(
                    t,
                    EventKind::RepCounted { block: i, rep: n, t_rise_ms: start, t_fall_ms: t, peak_volts: peak },
                );
            }
            _ => {}
        }

        self.track_attempt(i, obs, led);

        let target = self.program.blocks[i].reps as usize;
        if self.blocks[i].attempts.len() >= target && self.blocks[i].open_rep.is_none() {
            let reps = self.blocks[i].reps.len();
            self.close_block(i, t, BlockStatus::Complete);
            self.emit(t, EventKind::BlockComplete { block: i, reps });
            self.advance(i, t);
        }
    }

    fn track_attempt(&mut self, i: usize, obs: &Observation, led: bool) {
        let t = obs.t_ms;
        let on_target = obs.inputs == self.program.blocks[i].target;
        let ledger = &mut self.blocks[i];
        match (&mut ledger.open_attempt, on_target) {
            (None, true) => {
                ledger.open_attempt =
                    Some(Attempt { t_start_ms: t, t_end_ms: t, peak_volts: obs.output_volts, led_on: led });
            }
            (Some(a), true) => {
                a.peak_volts = a.peak_volts.max(obs.output_volts);
                a.led_on |= led;
                a.t_end_ms = t;
            }
            (Some(a), false) => {
                let mut done = *a;
                done.t_end_ms = t;
                ledger.open_attempt = None;
                ledger.attempts.push(done);
                let n = ledger.attempts.len();
                if !done.led_on {
                    self.emit(t, EventKind::LedOffAtPeak { block: i, attempt: n, peak_volts: done.peak_volts });
                }
            }
            (None, false) => {}
        }
    }

    fn close_block(&mut self, i: usize, t: u64, status: BlockStatus) {
        let ledger = &mut self.blocks[i];
        ledger.status = status;
        ledger.t_exit_ms = Some(t);
        ledger.open_rep = None;
        ledger.open_attempt = None;
    }

    fn advance(&mut self, i: usize, t: u64) {
        if i + 1 < self.blocks.len() {
            self.phase = Phase::Selecting(i + 1);
        } else {
            self.phase = Phase::Complete;
            self.emit(t, EventKind::SessionComplete);
        }
    }

    /// Ends a session whose trace ran out before the program finished.
    pub fn abort(&mut self) {
        if self.phase.is_final() {
            return;
        }
        let t = self.last_t.unwrap_or(0);
        let phase = self.phase.to_string();
        if let Phase::Exercising(i) = self.phase {
            self.close_block(i, t, BlockStatus::Aborted);
            self.emit(t, EventKind::BlockAborted { block: i, reason: "trace ended".into() });
        }
        self.phase = Phase::Aborted;
        self.emit(t, EventKind::SessionAborted { phase });
    }

    fn emit(&mut self, t_ms: u64, kind: EventKind) {
        self.events.push(Event { t_ms, kind });
    }

    fn log_voltage(&mut self, obs: &Observation, led: bool) {
        let changed =
            self.voltage_log.last().is_none_or(|l| l.volts != obs.output_volts || l.selection != obs.selection);
        if changed {
            self.voltage_log.push(VoltageSample {
                t_ms: obs.t_ms,
                selection: obs.selection,
                volts: obs.output_volts,
                led,
            });
        }
    }

    fn track_rom(&mut self, obs: &Observation) {
        let now: BTreeSet<(Joint, bool)> =
            obs.rom_violations.iter().map(|v| (v.joint, v.motion == Motion::Flexion)).collect();
        for v in &obs.rom_violations {
            if !self.violating.contains(&(v.joint, v.motion == Motion::Flexion)) {
                let kind = EventKind::RomViolation { joint: v.joint, motion: v.motion, angle: v.angle, limit: v.limit };
                self.emit(obs.t_ms, kind);
            }
        }
        self.violating = now;
    }
}
