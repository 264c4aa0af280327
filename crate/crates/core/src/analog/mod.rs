// SPDX-License-Identifier: Apache-2.0

//! Analog voltage propagation through an active circuit.
//!
//! Each gate kind has a behavioral transfer model: a low output level and an
//! affine high output in terms of the voltage that drives it. Models are fitted
//! to bench readings of the reference circuit. Faults force or scale the
//! voltage of a net or gate output.

mod calibration;
mod diagnose;
mod fault;
mod garment;
mod model;
mod propagate;

use thiserror::Error;

use crate::dsl::GateKind;

pub use calibration::{CalibrationPoint, CalibrationReading, CalibrationReadings, DriveState};
pub use diagnose::{default_fault_universe, fault_signatures, faulty_truth_table, localize_fault, DROOP_GRID};
pub use fault::{Fault, FaultEffect, FaultParseError, FaultSubject};
pub use garment::GarmentStage;
pub use model::{fit_gate_models, GateModel, GateModelSet};
pub use propagate::{propagate, VoltageState};

/// Output threshold separating logic 0 from logic 1.
pub const DEFAULT_THRESHOLD: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalogError {
    #[error("not enough calibration data for {kind} gates: {detail}")]
    InsufficientData { kind: GateKind, detail: String },
    #[error("fault subject '{0}' is not part of the active circuit")]
    InactiveFaultSubject(String),
    #[error("calibration table: {0}")]
    Calibration(String),
}

/// 1 iff `volts` is strictly above `threshold`.
pub fn quantize(volts: f64, threshold: f64) -> bool {
    volts > threshold
}
