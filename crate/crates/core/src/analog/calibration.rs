// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::dsl::{GateKind, Pin};
use crate::netlist::{AliasMap, Netlist, Source};

use super::AnalogError;

/// Bench readings of the reference circuit, one row per gate and input pair.
pub const TABLE1_CSV: &str = include_str!("../../assets/table1.csv");

/// Sensor voltage for a closed input during bench measurements.
const BENCH_HIGH: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReading {
    /// Config id, e.g. `circuit1`.
    pub circuit: String,
    pub input_a: u8,
    pub input_b: u8,
    /// Gate name as shown in reports (see [`AliasMap`]).
    pub gate: String,
    pub volts: f64,
    pub usable: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalibrationReadings {
    pub readings: Vec<CalibrationReading>,
}

/// Whether a gate output was logically high, and what drove it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveState {
    Low,
    High { drive: f64 },
}

/// A reading reduced to what the model fit needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationPoint {
    pub kind: GateKind,
    pub state: DriveState,
    pub volts: f64,
}

impl CalibrationReadings {
    pub fn from_csv(reader: impl Read) -> Result<Self, AnalogError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let readings = rdr
            .deserialize()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| AnalogError::Calibration(format!("row {}: {e}", i + 1))))
            .collect::<Result<Vec<CalibrationReading>, _>>()?;
        if readings.is_empty() {
            return Err(AnalogError::Calibration("no readings".into()));
        }
        for r in &readings {
            if r.input_a > 1 || r.input_b > 1 || !r.volts.is_finite() || r.volts < 0.0 {
                return Err(AnalogError::Calibration(format!(
                    "bad reading {} ({},{}) {} = {}",
                    r.circuit, r.input_a, r.input_b, r.gate, r.volts
                )));
            }
        }
        Ok(Self { readings })
    }

    /// The shipped bench table.
    pub fn table1() -> Self {
        Self::from_csv(TABLE1_CSV.as_bytes()).expect("shipped calibration table is valid")
    }

    pub fn usable(&self) -> impl Iterator<Item = &CalibrationReading> {
        self.readings.iter().filter(|r| r.usable)
    }

    /// Classifies each usable reading as high or low by boolean evaluation of
    /// the circuit, and finds its driving voltage from upstream readings in the
    /// same row. High readings whose drive cannot be resolved (an upstream
    /// reading is missing or unusable) are dropped.
    pub fn to_points(
        &self,
        netlist: &Netlist,
        aliases: &AliasMap,
        v_in_hi: f64,
    ) -> Result<Vec<CalibrationPoint>, AnalogError> {
        let mut rows: BTreeMap<(&str, u8, u8), BTreeMap<&str, &CalibrationReading>> = BTreeMap::new();
        for r in &self.readings {
            let gate = aliases.resolve(&r.circuit, &r.gate);
            rows.entry((r.circuit.as_str(), r.input_a, r.input_b)).or_default().insert(gate, r);
        }

        let mut points = Vec::new();
        for ((circuit, a, b), row) in &rows {
            let active = netlist.activate_config(circuit).map_err(|e| AnalogError::Calibration(e.to_string()))?;
            let logic = active.gate_levels(*a == 1, *b == 1);
            let upstream = |src: &Source| -> Option<f64> {
                match src {
                    Source::Bus(bus) => netlist.buses.get(bus).copied(),
                    Source::Sensor(s) if s == "A" => Some(f64::from(*a) * BENCH_HIGH),
                    Source::Sensor(s) if s == "B" => Some(f64::from(*b) * BENCH_HIGH),
                    Source::Sensor(_) => Some(0.0),
                    Source::Gate(g) => row.get(g.as_str()).filter(|r| r.usable).map(|r| r.volts),
                }
            };
            for (gate, reading) in row {
                if !reading.usable {
                    continue;
                }
                if !active.contains_gate(gate) {
                    return Err(AnalogError::Calibration(format!(
                        "gate '{}' is not active in {circuit}",
                        reading.gate
                    )));
                }
                let kind = active.gate_kind(gate);
                let state = if !logic[*gate] {
                    DriveState::Low
                } else if kind == GateKind::Not {
                    let Some(drive) = active.pin_driver(gate, Pin::Vcc).and_then(|n| upstream(&n.driver)) else {
                        continue;
                    };
                    DriveState::High { drive }
                } else {
                    let inputs: Option<Vec<f64>> = kind
                        .input_pins()
                        .iter()
                        .map(|p| active.pin_driver(gate, *p).map_or(Some(0.0), |n| upstream(&n.driver)))
                        .collect();
                    let Some(inputs) = inputs else { continue };
                    let high = inputs.iter().copied().filter(|v| *v >= v_in_hi);
                    let drive = match kind {
                        GateKind::And => high.fold(f64::INFINITY, f64::min),
                        _ => high.fold(f64::NEG_INFINITY, f64::max),
                    };
                    DriveState::High { drive }
                };
                points.push(CalibrationPoint { kind, state, volts: reading.volts });
            }
        }
        Ok(points)
    }
}
